//! Problem files: parsing and validation into typed tasks.

use std::fmt;

use num_rational::BigRational;
use serde_json::{Map, Value};

use wcomm_core::arithlocal::{QuadraticFormQ, QuaternionAlgebraQ};
use wcomm_core::exactnum::rational::parse_rational;
use wcomm_core::exactnum::{MatrixQ, PolyQ};
use wcomm_core::rootsys::{Family, RootSystemType};
use wcomm_core::weakcomm::{GroupKind, SemisimpleElement};

use crate::spans::{LineIndex, Seg};

pub const FORMAT_VERSION: u64 = 1;

pub const TASKS: [&str; 6] = ["rootinfo", "weakcomm", "generic", "spectrum", "twins", "dichotomy"];

/// Validation failure located at a line of the problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub exponent_bound: i64,
    pub prime_budget: u64,
    pub word_length: usize,
    pub precision_bits: u32,
    pub seed: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            exponent_bound: 20,
            prime_budget: 1000,
            word_length: 3,
            precision_bits: 64,
            seed: None,
        }
    }
}

/// Command-line values that take precedence over the file's options.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub exponent_bound: Option<i64>,
    pub prime_budget: Option<u64>,
    pub word_length: Option<usize>,
    pub precision_bits: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub enum GenericInput {
    Polynomial { poly: PolyQ, family: Family },
    Element(SemisimpleElement),
    Walk {
        group: GroupKind,
        generators: Vec<MatrixQ>,
        length: usize,
        count: usize,
    },
}

#[derive(Debug, Clone)]
pub enum Task {
    RootInfo {
        root_system: RootSystemType,
        vector: Option<Vec<BigRational>>,
    },
    WeakComm {
        group: GroupKind,
        left: Vec<SemisimpleElement>,
        right: Vec<SemisimpleElement>,
    },
    Generic(GenericInput),
    Spectrum {
        generators: Vec<MatrixQ>,
        compare: Option<Vec<MatrixQ>>,
    },
    Twins {
        form: QuadraticFormQ,
        quaternion: QuaternionAlgebraQ,
        hermitian_definite_at_infinity: bool,
    },
    Dichotomy {
        g: SemisimpleElement,
        x: MatrixQ,
        prime: Option<u64>,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::RootInfo { .. } => "rootinfo",
            Task::WeakComm { .. } => "weakcomm",
            Task::Generic(_) => "generic",
            Task::Spectrum { .. } => "spectrum",
            Task::Twins { .. } => "twins",
            Task::Dichotomy { .. } => "dichotomy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub task: Task,
    pub options: Options,
}

struct Ctx {
    ix: LineIndex,
}

type Res<T> = Result<T, ValidationError>;

fn key(path: &[Seg], k: &str) -> Vec<Seg> {
    let mut p = path.to_vec();
    p.push(Seg::Key(k.to_string()));
    p
}

fn idx(path: &[Seg], i: usize) -> Vec<Seg> {
    let mut p = path.to_vec();
    p.push(Seg::Index(i));
    p
}

fn describe(path: &[Seg]) -> String {
    let mut s = String::new();
    for seg in path {
        match seg {
            Seg::Key(k) if s.is_empty() => s.push_str(k),
            Seg::Key(k) => {
                s.push('.');
                s.push_str(k);
            }
            Seg::Index(i) => s.push_str(&format!("[{i}]")),
        }
    }
    if s.is_empty() {
        "document".into()
    } else {
        s
    }
}

impl Ctx {
    fn err<T>(&self, path: &[Seg], msg: impl Into<String>) -> Res<T> {
        Err(ValidationError {
            line: self.ix.line(path),
            message: format!("{}: {}", describe(path), msg.into()),
        })
    }

    fn object<'a>(&self, v: &'a Value, path: &[Seg], allowed: &[&str]) -> Res<&'a Map<String, Value>> {
        let Some(m) = v.as_object() else {
            return self.err(path, "expected an object");
        };
        for k in m.keys() {
            if !allowed.contains(&k.as_str()) {
                return self.err(&key(path, k), format!("unknown field (expected one of {})", allowed.join(", ")));
            }
        }
        Ok(m)
    }

    fn field<'a>(&self, m: &'a Map<String, Value>, path: &[Seg], k: &str) -> Res<&'a Value> {
        match m.get(k) {
            Some(v) => Ok(v),
            None => self.err(path, format!("missing field `{k}`")),
        }
    }

    fn array<'a>(&self, v: &'a Value, path: &[Seg]) -> Res<&'a Vec<Value>> {
        match v.as_array() {
            Some(a) => Ok(a),
            None => self.err(path, "expected an array"),
        }
    }

    fn string<'a>(&self, v: &'a Value, path: &[Seg]) -> Res<&'a str> {
        match v.as_str() {
            Some(s) => Ok(s),
            None => self.err(path, "expected a string"),
        }
    }

    fn boolean(&self, v: &Value, path: &[Seg]) -> Res<bool> {
        match v.as_bool() {
            Some(b) => Ok(b),
            None => self.err(path, "expected true or false"),
        }
    }

    /// Nonnegative integer given as a JSON integer or a decimal string.
    fn uint(&self, v: &Value, path: &[Seg]) -> Res<u64> {
        let parsed = match v {
            Value::Number(n) => n.as_u64(),
            Value::String(s) => s.trim().parse::<u64>().ok(),
            _ => None,
        };
        match parsed {
            Some(x) => Ok(x),
            None => self.err(path, "expected a nonnegative integer"),
        }
    }

    fn uint_in(&self, v: &Value, path: &[Seg], lo: u64, hi: u64) -> Res<u64> {
        let x = self.uint(v, path)?;
        if x < lo || x > hi {
            return self.err(path, format!("{x} is outside the range {lo}..={hi}"));
        }
        Ok(x)
    }

    /// Rational given as a string "p/q" or a JSON integer. Floats are
    /// rejected so that inputs stay exact.
    fn rational(&self, v: &Value, path: &[Seg]) -> Res<BigRational> {
        match v {
            Value::String(s) => match parse_rational(s) {
                Ok(q) => Ok(q),
                Err(e) => self.err(path, e.to_string()),
            },
            Value::Number(n) if n.is_i64() || n.is_u64() => {
                Ok(parse_rational(&n.to_string()).expect("integer literal"))
            }
            Value::Number(_) => self.err(path, "floating-point numbers are not accepted; write a rational string such as \"3/2\""),
            _ => self.err(path, "expected a rational string such as \"3/2\""),
        }
    }

    fn rationals(&self, v: &Value, path: &[Seg]) -> Res<Vec<BigRational>> {
        self.array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, x)| self.rational(x, &idx(path, i)))
            .collect()
    }

    fn matrix(&self, v: &Value, path: &[Seg]) -> Res<MatrixQ> {
        let rows = self.array(v, path)?;
        if rows.is_empty() {
            return self.err(path, "empty matrix");
        }
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            out.push(self.rationals(r, &idx(path, i))?);
        }
        let n = out.len();
        if out.iter().any(|r| r.len() != n) {
            return self.err(path, format!("expected a square matrix with {n} entries per row"));
        }
        Ok(MatrixQ::from_rows(out).expect("rectangular"))
    }

    fn matrices(&self, v: &Value, path: &[Seg]) -> Res<Vec<MatrixQ>> {
        let a = self.array(v, path)?;
        if a.is_empty() {
            return self.err(path, "expected at least one matrix");
        }
        a.iter().enumerate().map(|(i, m)| self.matrix(m, &idx(path, i))).collect()
    }

    fn polynomial(&self, v: &Value, path: &[Seg]) -> Res<PolyQ> {
        let c = self.rationals(v, path)?;
        let f = PolyQ::new(c);
        if f.is_zero() {
            return self.err(path, "zero polynomial");
        }
        Ok(f)
    }

    fn group(&self, v: &Value, path: &[Seg]) -> Res<GroupKind> {
        let s = self.string(v, path)?;
        match parse_group(s) {
            Some(g) => Ok(g),
            None => self.err(path, format!("unknown group {s:?} (expected SLn, Spn with n even, or SOn)")),
        }
    }

    fn element(&self, m: MatrixQ, group: GroupKind, path: &[Seg]) -> Res<SemisimpleElement> {
        let g = match SemisimpleElement::new(m, group) {
            Ok(g) => g,
            Err(e) => return self.err(path, e.to_string()),
        };
        if !g.is_semisimple() {
            return self.err(path, "element is not semisimple (minimal polynomial has a repeated factor)");
        }
        Ok(g)
    }

    fn elements(&self, v: &Value, path: &[Seg], group: GroupKind) -> Res<Vec<SemisimpleElement>> {
        let ms = self.matrices(v, path)?;
        ms.into_iter()
            .enumerate()
            .map(|(i, m)| self.element(m, group, &idx(path, i)))
            .collect()
    }
}

/// `SL3`, `Sp4`, `SO5`; the number is the matrix size.
pub fn parse_group(s: &str) -> Option<GroupKind> {
    let s = s.trim();
    let (kind, n) = if let Some(r) = s.strip_prefix("SL") {
        ("SL", r)
    } else if let Some(r) = s.strip_prefix("Sp") {
        ("Sp", r)
    } else if let Some(r) = s.strip_prefix("SO") {
        ("SO", r)
    } else {
        return None;
    };
    let n: usize = n.parse().ok()?;
    match kind {
        "SL" if n >= 2 => Some(GroupKind::SL(n)),
        "Sp" if n >= 2 && n % 2 == 0 => Some(GroupKind::Sp(n)),
        "SO" if n >= 3 => Some(GroupKind::SO(n)),
        _ => None,
    }
}

/// Parse and validate a problem file; `overrides` replace file options.
pub fn parse_problem(src: &str, overrides: &Overrides) -> Result<Problem, ValidationError> {
    let doc: Value = serde_json::from_str(src).map_err(|e| ValidationError {
        line: e.line().max(1),
        message: format!("invalid JSON: {e}"),
    })?;
    let cx = Ctx {
        ix: LineIndex::build(src),
    };
    let root: Vec<Seg> = Vec::new();
    let top = cx.object(&doc, &root, &["version", "task", "payload", "options"])?;
    let version = cx.uint(cx.field(top, &root, "version")?, &key(&root, "version"))?;
    if version != FORMAT_VERSION {
        return cx.err(&key(&root, "version"), format!("unsupported version {version} (expected {FORMAT_VERSION})"));
    }
    let tpath = key(&root, "task");
    let task_name = cx.string(cx.field(top, &root, "task")?, &tpath)?;
    if !TASKS.contains(&task_name) {
        return cx.err(&tpath, format!("unknown task {task_name:?} (expected one of {})", TASKS.join(", ")));
    }
    let options = parse_options(&cx, top.get("options"), overrides)?;
    let ppath = key(&root, "payload");
    let payload = cx.field(top, &root, "payload")?;
    let task = match task_name {
        "rootinfo" => parse_rootinfo(&cx, payload, &ppath)?,
        "weakcomm" => parse_weakcomm(&cx, payload, &ppath)?,
        "generic" => parse_generic(&cx, payload, &ppath, &options)?,
        "spectrum" => parse_spectrum(&cx, payload, &ppath)?,
        "twins" => parse_twins(&cx, payload, &ppath)?,
        _ => parse_dichotomy(&cx, payload, &ppath)?,
    };
    Ok(Problem { task, options })
}

fn parse_options(cx: &Ctx, v: Option<&Value>, ov: &Overrides) -> Res<Options> {
    let mut o = Options::default();
    let path = vec![Seg::Key("options".into())];
    if let Some(v) = v {
        let m = cx.object(v, &path, &["exponentBound", "primeBudget", "wordLength", "precisionBits", "seed"])?;
        if let Some(x) = m.get("exponentBound") {
            o.exponent_bound = cx.uint_in(x, &key(&path, "exponentBound"), 1, 1000)? as i64;
        }
        if let Some(x) = m.get("primeBudget") {
            o.prime_budget = cx.uint_in(x, &key(&path, "primeBudget"), 2, 10_000_000)?;
        }
        if let Some(x) = m.get("wordLength") {
            o.word_length = cx.uint_in(x, &key(&path, "wordLength"), 1, 12)? as usize;
        }
        if let Some(x) = m.get("precisionBits") {
            o.precision_bits = cx.uint_in(x, &key(&path, "precisionBits"), 16, 4096)? as u32;
        }
        if let Some(x) = m.get("seed") {
            o.seed = Some(cx.uint(x, &key(&path, "seed"))?);
        }
    }
    if let Some(x) = ov.exponent_bound {
        o.exponent_bound = x;
    }
    if let Some(x) = ov.prime_budget {
        o.prime_budget = x;
    }
    if let Some(x) = ov.word_length {
        o.word_length = x;
    }
    if let Some(x) = ov.precision_bits {
        o.precision_bits = x;
    }
    if ov.seed.is_some() {
        o.seed = ov.seed;
    }
    Ok(o)
}

fn parse_rootinfo(cx: &Ctx, v: &Value, path: &[Seg]) -> Res<Task> {
    let m = cx.object(v, path, &["type", "vector"])?;
    let tp = key(path, "type");
    let s = cx.string(cx.field(m, path, "type")?, &tp)?;
    let root_system: RootSystemType = match s.parse() {
        Ok(t) => t,
        Err(e) => return cx.err(&tp, format!("{e}")),
    };
    let vector = match m.get("vector") {
        Some(x) => {
            let vp = key(path, "vector");
            let vec = cx.rationals(x, &vp)?;
            if vec.len() != root_system.ambient_dim() {
                return cx.err(&vp, format!("expected {} coordinates for {root_system}", root_system.ambient_dim()));
            }
            Some(vec)
        }
        None => None,
    };
    Ok(Task::RootInfo { root_system, vector })
}

fn parse_weakcomm(cx: &Ctx, v: &Value, path: &[Seg]) -> Res<Task> {
    let m = cx.object(v, path, &["group", "left", "right"])?;
    let group = cx.group(cx.field(m, path, "group")?, &key(path, "group"))?;
    let left = cx.elements(cx.field(m, path, "left")?, &key(path, "left"), group)?;
    let right = cx.elements(cx.field(m, path, "right")?, &key(path, "right"), group)?;
    Ok(Task::WeakComm { group, left, right })
}

fn parse_generic(cx: &Ctx, v: &Value, path: &[Seg], options: &Options) -> Res<Task> {
    let m = cx.object(v, path, &["polynomial", "family", "group", "matrix", "generators", "walk"])?;
    if let Some(p) = m.get("polynomial") {
        for k in ["group", "matrix", "generators", "walk"] {
            if m.contains_key(k) {
                return cx.err(&key(path, k), "not allowed together with `polynomial`");
            }
        }
        let poly = cx.polynomial(p, &key(path, "polynomial"))?;
        let fp = key(path, "family");
        let fs = cx.string(cx.field(m, path, "family")?, &fp)?;
        let family: Family = match fs.parse() {
            Ok(f) => f,
            Err(e) => return cx.err(&fp, format!("{e}")),
        };
        if !matches!(family, Family::A | Family::B | Family::C | Family::D) {
            return cx.err(&fp, "certification supports the families A, B, C and D");
        }
        return Ok(Task::Generic(GenericInput::Polynomial { poly, family }));
    }
    let group = cx.group(cx.field(m, path, "group")?, &key(path, "group"))?;
    if let Some(x) = m.get("matrix") {
        if m.contains_key("generators") || m.contains_key("walk") {
            return cx.err(&key(path, "matrix"), "give either `matrix` or `generators` with `walk`");
        }
        let mp = key(path, "matrix");
        let g = cx.element(cx.matrix(x, &mp)?, group, &mp)?;
        return Ok(Task::Generic(GenericInput::Element(g)));
    }
    let gp = key(path, "generators");
    let generators = cx.matrices(cx.field(m, path, "generators")?, &gp)?;
    for (i, g) in generators.iter().enumerate() {
        if let Err(e) = SemisimpleElement::new(g.clone(), group) {
            return cx.err(&idx(&gp, i), e.to_string());
        }
    }
    let wp = key(path, "walk");
    let w = cx.object(cx.field(m, path, "walk")?, &wp, &["length", "count"])?;
    let length = cx.uint_in(cx.field(w, &wp, "length")?, &key(&wp, "length"), 1, 64)? as usize;
    let count = cx.uint_in(cx.field(w, &wp, "count")?, &key(&wp, "count"), 1, 10_000)? as usize;
    if options.seed.is_none() {
        return cx.err(&wp, "random walks need a seed (options.seed or --seed)");
    }
    Ok(Task::Generic(GenericInput::Walk {
        group,
        generators,
        length,
        count,
    }))
}

fn parse_spectrum(cx: &Ctx, v: &Value, path: &[Seg]) -> Res<Task> {
    let m = cx.object(v, path, &["generators", "compare"])?;
    let check = |ms: &[MatrixQ], p: &[Seg]| -> Res<()> {
        for (i, g) in ms.iter().enumerate() {
            if g.rows() != 2 || !num_traits::One::is_one(&g.det()) {
                return cx.err(&idx(p, i), "expected a 2x2 matrix of determinant 1");
            }
        }
        Ok(())
    };
    let gp = key(path, "generators");
    let generators = cx.matrices(cx.field(m, path, "generators")?, &gp)?;
    check(&generators, &gp)?;
    let compare = match m.get("compare") {
        Some(x) => {
            let cp = key(path, "compare");
            let c = cx.matrices(x, &cp)?;
            check(&c, &cp)?;
            Some(c)
        }
        None => None,
    };
    Ok(Task::Spectrum { generators, compare })
}

fn parse_twins(cx: &Ctx, v: &Value, path: &[Seg]) -> Res<Task> {
    let m = cx.object(v, path, &["form", "quaternion", "hermitianDefiniteAtInfinity"])?;
    let fp = key(path, "form");
    let diag = cx.rationals(cx.field(m, path, "form")?, &fp)?;
    let form = match QuadraticFormQ::new(diag) {
        Ok(f) => f,
        Err(e) => return cx.err(&fp, e.to_string()),
    };
    if form.dim() % 2 == 0 || form.dim() < 7 {
        return cx.err(&fp, format!("expected an odd number of coefficients, at least 7 (got {})", form.dim()));
    }
    let qp = key(path, "quaternion");
    let ab = cx.rationals(cx.field(m, path, "quaternion")?, &qp)?;
    if ab.len() != 2 {
        return cx.err(&qp, "expected the pair [a, b]");
    }
    let quaternion = match QuaternionAlgebraQ::new(ab[0].clone(), ab[1].clone()) {
        Ok(h) => h,
        Err(e) => return cx.err(&qp, e.to_string()),
    };
    let hp = key(path, "hermitianDefiniteAtInfinity");
    let hermitian_definite_at_infinity = match m.get("hermitianDefiniteAtInfinity") {
        Some(x) => cx.boolean(x, &hp)?,
        None => false,
    };
    Ok(Task::Twins {
        form,
        quaternion,
        hermitian_definite_at_infinity,
    })
}

fn parse_dichotomy(cx: &Ctx, v: &Value, path: &[Seg]) -> Res<Task> {
    let m = cx.object(v, path, &["group", "g", "x", "prime"])?;
    let group = cx.group(cx.field(m, path, "group")?, &key(path, "group"))?;
    let gp = key(path, "g");
    let g = cx.element(cx.matrix(cx.field(m, path, "g")?, &gp)?, group, &gp)?;
    let xp = key(path, "x");
    let x = cx.matrix(cx.field(m, path, "x")?, &xp)?;
    if let Err(e) = SemisimpleElement::new(x.clone(), group) {
        return cx.err(&xp, e.to_string());
    }
    let prime = match m.get("prime") {
        Some(p) => {
            let pp = key(path, "prime");
            let p = cx.uint(p, &pp)?;
            if p < 5 || !wcomm_core::exactnum::rational::is_prime(p) {
                return cx.err(&pp, format!("{p} is not a prime of at least 5"));
            }
            Some(p)
        }
        None => None,
    };
    Ok(Task::Dichotomy { g, x, prime })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Result<Problem, ValidationError> {
        parse_problem(src, &Overrides::default())
    }

    #[test]
    fn groups() {
        assert_eq!(parse_group("SL3"), Some(GroupKind::SL(3)));
        assert_eq!(parse_group("Sp4"), Some(GroupKind::Sp(4)));
        assert_eq!(parse_group("Sp3"), None);
        assert_eq!(parse_group("GL2"), None);
    }

    #[test]
    fn bad_rational_is_located() {
        let src = "{\n  \"version\": 1,\n  \"task\": \"weakcomm\",\n  \"payload\": {\n    \"group\": \"SL2\",\n    \"left\": [[[\"2\", \"1\"], [\"1\", \"1\"]]],\n    \"right\": [[[\"1/0\", \"1\"],\n      [\"1\", \"1\"]]]\n  }\n}\n";
        let e = parse(src).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.message.contains("zero denominator"), "{}", e.message);
    }

    #[test]
    fn walk_needs_seed() {
        let src = r#"{"version": 1, "task": "generic", "payload": {"group": "SL2", "generators": [[["1","2"],["0","1"]]], "walk": {"length": 4, "count": 3}}}"#;
        let e = parse(src).unwrap_err();
        assert!(e.message.contains("seed"));
        let ov = Overrides {
            seed: Some(7),
            ..Overrides::default()
        };
        assert!(parse_problem(src, &ov).is_ok());
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let e = parse(r#"{"version": 2, "task": "rootinfo", "payload": {"type": "B3"}}"#).unwrap_err();
        assert!(e.message.contains("version"));
        let e = parse(r#"{"version": 1, "task": "rootinfo", "payload": {"type": "B3", "rnak": 3}}"#).unwrap_err();
        assert!(e.message.contains("unknown field"));
        let e = parse(r#"{"version": 1, "task": "rootinfo", "payload": {"type": "B3", "vector": [0.5, 1, 2]}}"#).unwrap_err();
        assert!(e.message.contains("floating-point"));
    }
}
