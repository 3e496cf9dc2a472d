//! Running tasks and assembling structured reports. All rationals are
//! emitted as strings and all intervals as `[lo, hi]` string pairs.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use wcomm_core::arithlocal::{twins, LocalType, TwinsReport};
use wcomm_core::exactnum::rational::format_rational;
use wcomm_core::exactnum::{AlgebraicNumber, PolyQ, RationalInterval};
use wcomm_core::genericity::dichotomy::{dichotomy_check, DichotomyConclusion};
use wcomm_core::genericity::walk::random_walk_sample;
use wcomm_core::genericity::{certify_generic_poly, is_generic_element, is_regular, GenericityCertificate};
use wcomm_core::rootsys::{
    casimir_constant, conjugacy_classes, minus_one_in_weyl, quadratic_sum, roots, weyl_order, LengthClass,
};
use wcomm_core::spectra::{length_commensurable_samples, rational_length_spectrum, RatioVerdict, SpectrumSample};
use wcomm_core::weakcomm::{weakly_commensurable_samples, SemisimpleElement, Verdict, WeakCommConfig};

use crate::problem::{GenericInput, Options, Problem, Task, FORMAT_VERSION};

pub const TOOL_VERSION: &str = concat!("wcomm ", env!("CARGO_PKG_VERSION"));

/// Analysis failure after validation succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunError(pub String);

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RunError {}

fn fail<E: std::fmt::Display>(e: E) -> RunError {
    RunError(e.to_string())
}

pub fn input_hash(src: &str) -> String {
    hex::encode(Sha256::digest(src.as_bytes()))
}

fn q(x: &BigRational) -> Value {
    Value::String(format_rational(x))
}

fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn interval(iv: &RationalInterval) -> Value {
    json!(iv.to_strings())
}

fn poly(f: &PolyQ) -> Value {
    Value::Array(f.coeffs().iter().map(q).collect())
}

/// Minimal polynomial (constant term first) and an isolating box refined
/// to `bits` bits.
fn algebraic(a: &AlgebraicNumber, bits: u32) -> Result<Value, RunError> {
    let r = a.refine(bits).map_err(fail)?;
    let b = r.isolating_box();
    let mut m = Map::new();
    m.insert("minpoly".into(), poly(a.minpoly()));
    m.insert("re".into(), interval(&b.re.round_out(bits + 2)));
    m.insert("im".into(), interval(&b.im.round_out(bits + 2)));
    if let Some(x) = a.as_rational() {
        m.insert("exact".into(), q(&x));
    }
    Ok(Value::Object(m))
}

fn certificate(c: &GenericityCertificate) -> Value {
    let witnessed: Map<String, Value> = c
        .witnessed
        .iter()
        .map(|(k, p)| (k.to_string(), p.map_or(Value::Null, |p| json!(p))))
        .collect();
    json!({
        "status": format!("{:?}", c.status),
        "rootSystem": c.root_system.to_string(),
        "classCount": c.class_count,
        "witnessed": witnessed,
        "primesExamined": c.primes_examined,
        "classCollapse": c.class_collapse,
        "note": c.note,
    })
}

fn word_string(letters: &[usize]) -> String {
    letters
        .iter()
        .map(|&l| {
            let c = (b'a' + (l / 2) as u8) as char;
            if l % 2 == 1 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

/// Outcome of one run: the structured report and a text summary.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
}

/// Run a validated problem. `timings` adds wall-clock data, which is the
/// only nondeterministic part of a report.
pub fn run_problem(problem: &Problem, src: &str, timings: bool) -> Result<Outcome, RunError> {
    let start = Instant::now();
    let o = &problem.options;
    let (result, text) = match &problem.task {
        Task::RootInfo { root_system, vector } => rootinfo(root_system, vector.as_deref())?,
        Task::WeakComm { left, right, .. } => weakcomm(left, right, o)?,
        Task::Generic(input) => generic(input, o)?,
        Task::Spectrum { generators, compare } => spectrum(generators, compare.as_deref(), o)?,
        Task::Twins {
            form,
            quaternion,
            hermitian_definite_at_infinity,
        } => {
            let r = twins(form, quaternion, *hermitian_definite_at_infinity).map_err(fail)?;
            twins_json(&r)
        }
        Task::Dichotomy { g, x, prime } => {
            let r = dichotomy_check(g, x, *prime, o.prime_budget).map_err(fail)?;
            let (conclusion, long) = match &r.conclusion {
                DichotomyConclusion::Dense => ("dense", None),
                DichotomyConclusion::DenseOrLongRootSubgroup { long_root_type } => {
                    ("denseOrLongRootSubgroup", Some(long_root_type.clone()))
                }
            };
            let corroboration = r.corroboration.as_ref().map(|c| {
                json!({
                    "prime": c.prime,
                    "dim": c.dim,
                    "closureOrder": c.closure_order.to_string(),
                    "groupOrder": c.group_order.to_string(),
                    "generates": c.generates,
                })
            });
            let mut text = format!("root system {}: {conclusion}", r.root_system);
            if let Some(t) = &long {
                text.push_str(&format!(" (long root subgroup type {t})"));
            }
            if let Some(c) = &r.corroboration {
                text.push_str(&format!(
                    "\nclosure mod {}: {} of {} elements",
                    c.prime, c.closure_order, c.group_order
                ));
            }
            (
                json!({
                    "rootSystem": r.root_system.to_string(),
                    "conclusion": conclusion,
                    "longRootType": long,
                    "certificate": certificate(&r.certificate),
                    "corroboration": corroboration,
                }),
                text,
            )
        }
    };
    let mut report = json!({
        "version": FORMAT_VERSION,
        "toolVersion": TOOL_VERSION,
        "inputHash": input_hash(src),
        "task": problem.task.name(),
        "options": {
            "exponentBound": o.exponent_bound,
            "primeBudget": o.prime_budget,
            "wordLength": o.word_length,
            "precisionBits": o.precision_bits,
            "seed": o.seed,
        },
        "result": result,
    });
    if timings {
        report["timings"] = json!({ "totalMillis": start.elapsed().as_millis() as u64 });
    }
    Ok(Outcome { report, text })
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn rootinfo(
    rt: &wcomm_core::rootsys::RootSystemType,
    vector: Option<&[BigRational]>,
) -> Result<(Value, String), RunError> {
    let rs = roots(rt).map_err(fail)?;
    let long = rs.iter().filter(|r| r.length_class == LengthClass::Long).count();
    let short = rs.iter().filter(|r| r.length_class == LengthClass::Short).count();
    let classes = conjugacy_classes(rt).map_err(fail)?;
    let order = weyl_order(rt);
    let minus = minus_one_in_weyl(rt);
    let casimir = casimir_constant(rt).ok();
    let qsum = match vector {
        Some(x) => Some(quadratic_sum(rt, x).map_err(fail)?),
        None => None,
    };
    let text = format!(
        "{rt}: |W| = {order}, {} roots, {} conjugacy classes, -1 in W: {minus}",
        rs.len(),
        classes.len()
    );
    Ok((
        json!({
            "type": rt.to_string(),
            "family": rt.family().to_string(),
            "rank": rt.rank(),
            "weylOrder": big(&order),
            "rootCount": rs.len(),
            "longRootCount": long,
            "shortRootCount": short,
            "conjugacyClasses": classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "classCount": classes.len(),
            "nontrivialClassCount": classes.len() - 1,
            "minusOneInWeyl": minus,
            "casimirConstant": casimir.as_ref().map(q),
            "quadraticSum": qsum.as_ref().map(q),
        }),
        text,
    ))
}

fn element_json(g: &SemisimpleElement, bits: u32) -> Result<Value, RunError> {
    let ev = g.eigenvalues().map_err(fail)?;
    let eigen = ev.iter().map(|a| algebraic(a, bits)).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "charpoly": poly(g.charpoly()),
        "eigenvalues": eigen,
        "infiniteOrder": g.has_infinite_order().map_err(fail)?,
    }))
}

fn weakcomm(left: &[SemisimpleElement], right: &[SemisimpleElement], o: &Options) -> Result<(Value, String), RunError> {
    let cfg = WeakCommConfig {
        bound: o.exponent_bound,
        ..WeakCommConfig::default()
    };
    let r = weakly_commensurable_samples(left, right, &cfg).map_err(fail)?;
    let bits = o.precision_bits;
    let mut pairs = Vec::new();
    let mut lines = Vec::new();
    for p in &r.pairs {
        let (kind, witness, common) = match &p.verdict {
            Verdict::Yes { witness, common_value } => (
                "Yes",
                json!({ "left": witness.0, "right": witness.1 }),
                algebraic(common_value, bits)?,
            ),
            Verdict::NoUpToBound { .. } => ("NoUpToBound", Value::Null, Value::Null),
        };
        lines.push(format!("left[{}] ~ right[{}]: {kind}", p.left, p.right));
        pairs.push(json!({
            "left": p.left,
            "right": p.right,
            "verdict": kind,
            "witness": witness,
            "commonValue": common,
        }));
    }
    let verdict = if r.aggregate { "Yes" } else { "NoUpToBound" };
    lines.push(format!("aggregate: {verdict} (bound {})", o.exponent_bound));
    let l = left.iter().map(|g| element_json(g, bits)).collect::<Result<Vec<_>, _>>()?;
    let rr = right.iter().map(|g| element_json(g, bits)).collect::<Result<Vec<_>, _>>()?;
    Ok((
        json!({
            "bound": o.exponent_bound,
            "left": l,
            "right": rr,
            "pairs": pairs,
            "leftFinite": r.left_finite,
            "rightFinite": r.right_finite,
            "leftMatched": r.left_matched,
            "rightMatched": r.right_matched,
            "leftToRight": r.left_to_right,
            "rightToLeft": r.right_to_left,
            "aggregate": r.aggregate,
            "verdict": verdict,
        }),
        lines.join("\n"),
    ))
}

fn generic(input: &GenericInput, o: &Options) -> Result<(Value, String), RunError> {
    match input {
        GenericInput::Polynomial { poly: f, family } => {
            let c = certify_generic_poly(f, *family, o.prime_budget).map_err(fail)?;
            let text = format!("{f} as {}: {:?}", c.root_system, c.status);
            Ok((json!({ "input": "polynomial", "polynomial": poly(f), "certificate": certificate(&c) }), text))
        }
        GenericInput::Element(g) => {
            let regular = is_regular(g).map_err(fail)?;
            let c = is_generic_element(g, o.prime_budget).map_err(fail)?;
            let text = format!("element of {}: {:?}", g.group(), c.status);
            Ok((
                json!({
                    "input": "element",
                    "charpoly": poly(g.charpoly()),
                    "regular": regular,
                    "certificate": certificate(&c),
                }),
                text,
            ))
        }
        GenericInput::Walk {
            group,
            generators,
            length,
            count,
        } => {
            let seed = o.seed.expect("validated");
            let s = random_walk_sample(generators, *group, *length, *count, seed, o.prime_budget).map_err(fail)?;
            let words: Vec<Value> = s
                .words
                .iter()
                .map(|w| {
                    json!({
                        "word": word_string(&w.letters),
                        "charpoly": poly(&w.matrix.charpoly()),
                        "status": format!("{:?}", w.certificate.status),
                        "primesExamined": w.certificate.primes_examined,
                    })
                })
                .collect();
            let proportion = BigRational::new(BigInt::from(s.generic), BigInt::from((*count).max(1)));
            let text = format!("{} of {count} words certified generic", s.generic);
            Ok((
                json!({
                    "input": "walk",
                    "group": group.to_string(),
                    "length": length,
                    "count": count,
                    "words": words,
                    "generic": s.generic,
                    "proportion": q(&proportion),
                }),
                text,
            ))
        }
    }
}

fn spectrum_json(s: &SpectrumSample) -> Value {
    let entries: Vec<Value> = s
        .entries
        .iter()
        .map(|e| {
            json!({
                "word": word_string(&e.word),
                "t": {
                    "minpoly": poly(e.length.t.minpoly()),
                },
                "winding": e.length.winding,
                "length": interval(&e.length.numeric),
            })
        })
        .collect();
    Value::Array(entries)
}

fn spectrum(generators: &[wcomm_core::exactnum::MatrixQ], compare: Option<&[wcomm_core::exactnum::MatrixQ]>, o: &Options) -> Result<(Value, String), RunError> {
    let bits = o.precision_bits;
    let s1 = rational_length_spectrum(generators, o.word_length, bits).map_err(fail)?;
    let mut lines = vec![format!(
        "{} distinct lengths from words up to length {}",
        s1.entries.len(),
        o.word_length
    )];
    for e in s1.entries.iter().take(8) {
        lines.push(format!(
            "  {:<8} {:.12}",
            word_string(&e.word),
            e.length.numeric.to_f64_mid()
        ));
    }
    let mut result = json!({ "entries": spectrum_json(&s1) });
    if let Some(c) = compare {
        let s2 = rational_length_spectrum(c, o.word_length, bits).map_err(fail)?;
        let bound = o.exponent_bound.max(1) as u32;
        if s1.entries.is_empty() || s2.entries.is_empty() {
            return Err(RunError("no hyperbolic words to compare".into()));
        }
        let r = length_commensurable_samples(&s1, &s2, bound).map_err(fail)?;
        let table: Vec<Vec<Value>> = r
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| match v {
                        RatioVerdict::Rational { m, n, ratio } => {
                            json!({ "rational": true, "m": m, "n": n, "ratio": q(ratio) })
                        }
                        RatioVerdict::NoUpToBound { bound } => json!({ "rational": false, "bound": bound }),
                    })
                    .collect()
            })
            .collect();
        lines.push(format!("length commensurable up to bound {bound}: {}", r.aggregate));
        result["compare"] = json!({
            "entries": spectrum_json(&s2),
            "bound": bound,
            "table": table,
            "leftMatched": r.left_matched,
            "rightMatched": r.right_matched,
            "aggregate": r.aggregate,
        });
    }
    Ok((result, lines.join("\n")))
}

fn local_type(t: LocalType) -> &'static str {
    match t {
        LocalType::Split => "split",
        LocalType::Anisotropic => "anisotropic",
        LocalType::Intermediate => "intermediate",
    }
}

fn twins_json(r: &TwinsReport) -> (Value, String) {
    let mut lines = vec![format!("{:<6} {:<6} {:<12} {:<12} agree", "place", "witt", "B side", "C side")];
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            lines.push(format!(
                "{:<6} {:<6} {:<12} {:<12} {}",
                row.place.to_string(),
                row.witt_index,
                local_type(row.b_side),
                local_type(row.c_side),
                row.agree
            ));
            json!({
                "place": row.place.to_string(),
                "wittIndex": row.witt_index,
                "bSide": local_type(row.b_side),
                "quaternionSplit": row.quaternion_split,
                "cSide": local_type(row.c_side),
                "agree": row.agree,
            })
        })
        .collect();
    lines.push(format!("twins: {}", r.twins));
    let failing: Vec<String> = r.rows.iter().filter(|x| !x.agree).map(|x| x.place.to_string()).collect();
    (
        json!({
            "rank": r.rank,
            "perPlace": rows,
            "failingPlaces": failing,
            "twins": r.twins,
        }),
        lines.join("\n"),
    )
}
