//! Line numbers of values in JSON text, keyed by path. Assumes the text
//! already parsed as JSON.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Seg {
    Key(String),
    Index(usize),
}

pub type Path = Vec<Seg>;

#[derive(Debug, Default)]
pub struct LineIndex {
    lines: HashMap<Path, usize>,
}

impl LineIndex {
    pub fn build(src: &str) -> Self {
        let mut s = Scanner {
            b: src.as_bytes(),
            pos: 0,
            line: 1,
            out: HashMap::new(),
        };
        let mut path = Vec::new();
        s.value(&mut path);
        Self { lines: s.out }
    }

    /// Line of the value at `path`, or of its nearest recorded ancestor.
    pub fn line(&self, path: &[Seg]) -> usize {
        (0..=path.len())
            .rev()
            .find_map(|k| self.lines.get(&path[..k]).copied())
            .unwrap_or(1)
    }
}

struct Scanner<'a> {
    b: &'a [u8],
    pos: usize,
    line: usize,
    out: HashMap<Path, usize>,
}

impl Scanner<'_> {
    fn ws(&mut self) {
        while let Some(&c) = self.b.get(self.pos) {
            match c {
                b'\n' => self.line += 1,
                b' ' | b'\t' | b'\r' => {}
                _ => break,
            }
            self.pos += 1;
        }
    }

    fn string(&mut self) -> String {
        let start = self.pos + 1;
        self.pos += 1;
        while let Some(&c) = self.b.get(self.pos) {
            match c {
                b'\\' => self.pos += 1,
                b'"' => break,
                b'\n' => self.line += 1,
                _ => {}
            }
            self.pos += 1;
        }
        let raw = String::from_utf8_lossy(&self.b[start..self.pos.min(self.b.len())]).into_owned();
        self.pos += 1;
        serde_json::from_str::<String>(&format!("\"{raw}\"")).unwrap_or(raw)
    }

    fn value(&mut self, path: &mut Path) {
        self.ws();
        self.out.insert(path.clone(), self.line);
        match self.b.get(self.pos) {
            Some(b'{') => {
                self.pos += 1;
                loop {
                    self.ws();
                    match self.b.get(self.pos) {
                        Some(b'}') | None => {
                            self.pos += 1;
                            return;
                        }
                        Some(b',') => self.pos += 1,
                        Some(b'"') => {
                            let key = self.string();
                            self.ws();
                            self.pos += 1; // colon
                            path.push(Seg::Key(key));
                            self.value(path);
                            path.pop();
                        }
                        Some(_) => self.pos += 1,
                    }
                }
            }
            Some(b'[') => {
                self.pos += 1;
                let mut i = 0;
                loop {
                    self.ws();
                    match self.b.get(self.pos) {
                        Some(b']') | None => {
                            self.pos += 1;
                            return;
                        }
                        Some(b',') => self.pos += 1,
                        Some(_) => {
                            path.push(Seg::Index(i));
                            self.value(path);
                            path.pop();
                            i += 1;
                        }
                    }
                }
            }
            Some(b'"') => {
                self.string();
            }
            _ => {
                while let Some(&c) = self.b.get(self.pos) {
                    if matches!(c, b',' | b']' | b'}' | b' ' | b'\n' | b'\t' | b'\r') {
                        break;
                    }
                    self.pos += 1;
                }
            }
        }
    }
}
