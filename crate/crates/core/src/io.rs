//! Plain-text formats for spaces, vectors, scalars and reports.
//!
//! Space file: one `<atom-id> <probability>` per line.
//!
//! Data file: `vector NAME` / `scalar NAME` headers, each followed by one
//! `ATOM: v1, v2, ...` line per atom in space order. Lines of the form
//! `key = value` are metadata. `#` starts a comment everywhere.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Error;
use crate::l0_algebra::L0Scalar;
use crate::l0_module::L0Vector;
use crate::prob_space::{Atom, Event, ProbSpace, Space};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("{file}: cannot read: {reason}")]
    Read { file: String, reason: String },
    #[error("{file}:{line}: {message}")]
    Syntax { file: String, line: usize, message: String },
    #[error("{file}:{line}: atom `{atom}`: {message}")]
    Atom {
        file: String,
        line: usize,
        atom: String,
        message: String,
    },
    #[error("{file}: {source}")]
    Model { file: String, source: Error },
    #[error("{file}: {message}")]
    Content { file: String, message: String },
}

pub fn read_text(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::Read {
        file: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

/// Parses a space file. `float_tol` selects float mode.
pub fn parse_space(file: &str, text: &str, float_tol: Option<f64>) -> Result<Space, InputError> {
    let mut atoms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(id), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(InputError::Syntax {
                file: file.into(),
                line: i + 1,
                message: "expected `<atom-id> <probability>`".into(),
            });
        };
        let prob = Rational::parse_literal(p).map_err(|e| InputError::Atom {
            file: file.into(),
            line: i + 1,
            atom: id.into(),
            message: e.to_string(),
        })?;
        atoms.push(Atom::new(id, prob));
    }
    let built = match float_tol {
        Some(tol) => ProbSpace::new_float(atoms, tol),
        None => ProbSpace::new(atoms),
    };
    built.map_err(|source| InputError::Model {
        file: file.into(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Vector,
    Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub atom: String,
    pub line: usize,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub kind: BlockKind,
    pub name: String,
    pub line: usize,
    pub rows: Vec<Row>,
}

/// A parsed data file; literals are kept as text until the field is known.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub file: String,
    pub blocks: Vec<Block>,
    pub meta: Vec<(String, String)>,
}

pub fn parse_data(file: &str, text: &str) -> Result<DataFile, InputError> {
    let syntax = |line: usize, message: &str| InputError::Syntax {
        file: file.into(),
        line,
        message: message.into(),
    };
    let mut blocks: Vec<Block> = Vec::new();
    let mut meta = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            meta.push((key.trim().to_string(), value.trim().to_string()));
        } else if let Some((atom, rest)) = line.split_once(':') {
            let block = blocks.last_mut().ok_or_else(|| syntax(n, "atom row outside a block"))?;
            let values: Vec<String> = rest.split(',').map(|v| v.trim().to_string()).collect();
            if values.iter().any(String::is_empty) {
                return Err(InputError::Atom {
                    file: file.into(),
                    line: n,
                    atom: atom.trim().into(),
                    message: "empty value".into(),
                });
            }
            block.rows.push(Row {
                atom: atom.trim().into(),
                line: n,
                values,
            });
        } else {
            let mut parts = line.split_whitespace();
            let kind = match parts.next() {
                Some("vector") => BlockKind::Vector,
                Some("scalar") => BlockKind::Scalar,
                _ => return Err(syntax(n, "expected `vector NAME`, `scalar NAME`, `ATOM: values` or `key = value`")),
            };
            let name = parts.next().ok_or_else(|| syntax(n, "block header needs a name"))?;
            if parts.next().is_some() {
                return Err(syntax(n, "block name must be a single word"));
            }
            blocks.push(Block {
                kind,
                name: name.into(),
                line: n,
                rows: Vec::new(),
            });
        }
    }
    Ok(DataFile {
        file: file.into(),
        blocks,
        meta,
    })
}

pub fn load_data(path: &Path) -> Result<DataFile, InputError> {
    parse_data(&path.display().to_string(), &read_text(path)?)
}

impl DataFile {
    /// True when any literal carries an imaginary part.
    pub fn has_complex(&self) -> bool {
        self.blocks
            .iter()
            .flat_map(|b| &b.rows)
            .flat_map(|r| &r.values)
            .any(|v| v.contains('i'))
    }

    pub fn blocks_of(&self, kind: BlockKind) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.kind == kind)
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn content(&self, message: String) -> InputError {
        InputError::Content {
            file: self.file.clone(),
            message,
        }
    }

    /// Values of a block, one list per atom in space order.
    fn fibers<K: Scalar>(&self, block: &Block, space: &Space) -> Result<Vec<Vec<K>>, InputError> {
        let atoms = space.atoms();
        if block.rows.len() != atoms.len() {
            return Err(InputError::Syntax {
                file: self.file.clone(),
                line: block.line,
                message: format!(
                    "block `{}` has {} atom rows but the space has {} atoms",
                    block.name,
                    block.rows.len(),
                    atoms.len()
                ),
            });
        }
        let mut out = Vec::with_capacity(atoms.len());
        let mut width = None;
        for (row, atom) in block.rows.iter().zip(atoms) {
            let err = |message: String| InputError::Atom {
                file: self.file.clone(),
                line: row.line,
                atom: row.atom.clone(),
                message,
            };
            if row.atom != atom.id {
                return Err(err(format!("expected atom `{}` (space order)", atom.id)));
            }
            if block.kind == BlockKind::Scalar && row.values.len() != 1 {
                return Err(err(format!("scalar needs 1 value, found {}", row.values.len())));
            }
            if *width.get_or_insert(row.values.len()) != row.values.len() {
                return Err(err(format!("expected {} values, found {}", width.unwrap_or(0), row.values.len())));
            }
            let vals = row
                .values
                .iter()
                .map(|v| K::parse_literal(v).map_err(|e| err(e.to_string())))
                .collect::<Result<Vec<K>, _>>()?;
            out.push(vals);
        }
        Ok(out)
    }

    pub fn vector<K: Scalar>(&self, block: &Block, space: &Space) -> Result<L0Vector<K>, InputError> {
        let fibers = self.fibers(block, space)?;
        L0Vector::from_fibers(space, &fibers).map_err(|source| InputError::Model {
            file: self.file.clone(),
            source,
        })
    }

    pub fn scalar<K: Scalar>(&self, block: &Block, space: &Space) -> Result<L0Scalar<K>, InputError> {
        let fibers = self.fibers(block, space)?;
        L0Scalar::new(space, fibers.into_iter().map(|mut v| v.remove(0)).collect()).map_err(|source| {
            InputError::Model {
                file: self.file.clone(),
                source,
            }
        })
    }

    /// All vector blocks in file order.
    pub fn vectors<K: Scalar>(&self, space: &Space) -> Result<Vec<L0Vector<K>>, InputError> {
        let out = self
            .blocks_of(BlockKind::Vector)
            .map(|b| self.vector(b, space))
            .collect::<Result<Vec<_>, _>>()?;
        if out.is_empty() {
            return Err(self.content("no vector blocks".into()));
        }
        Ok(out)
    }

    /// All scalar blocks in file order.
    pub fn scalars<K: Scalar>(&self, space: &Space) -> Result<Vec<L0Scalar<K>>, InputError> {
        let out = self
            .blocks_of(BlockKind::Scalar)
            .map(|b| self.scalar(b, space))
            .collect::<Result<Vec<_>, _>>()?;
        if out.is_empty() {
            return Err(self.content("no scalar blocks".into()));
        }
        Ok(out)
    }

    /// The single scalar block of the file.
    pub fn only_scalar<K: Scalar>(&self, space: &Space) -> Result<L0Scalar<K>, InputError> {
        let mut all = self.scalars(space)?;
        if all.len() != 1 {
            return Err(self.content(format!("expected one scalar block, found {}", all.len())));
        }
        Ok(all.remove(0))
    }

    /// Vector blocks as per-atom matrices: `out[atom][block]` is the row
    /// of that block at that atom.
    pub fn row_matrices<K: Scalar>(&self, space: &Space) -> Result<Vec<Vec<Vec<K>>>, InputError> {
        let rows = self
            .blocks_of(BlockKind::Vector)
            .map(|b| self.fibers::<K>(b, space))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.is_empty() {
            return Err(self.content("no vector blocks".into()));
        }
        let width = rows[0][0].len();
        if rows.iter().any(|r| r[0].len() != width) {
            return Err(self.content("rows have different lengths".into()));
        }
        Ok((0..space.len()).map(|w| rows.iter().map(|r| r[w].clone()).collect()).collect())
    }
}

/// Event from a comma-separated list of atom ids (empty text is ∅).
pub fn parse_event(space: &Space, text: &str) -> Result<Event, Error> {
    let ids: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Event::from_ids(space, &ids)
}

// ---------------------------------------------------------------------------
// output

/// Builder for report text in the data-file syntax.
#[derive(Debug, Default, Clone)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Self {
            text: format!("# l0kit {title}\n"),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    pub fn comment(&mut self, text: &str) -> &mut Self {
        let _ = writeln!(self.text, "# {text}");
        self
    }

    pub fn vector<K: Scalar>(&mut self, name: &str, v: &L0Vector<K>) -> &mut Self {
        self.text.push_str(&render_vector(name, v));
        self
    }

    pub fn scalar<K: Scalar>(&mut self, name: &str, s: &L0Scalar<K>) -> &mut Self {
        self.text.push_str(&render_scalar(name, s));
        self
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn render_vector<K: Scalar>(name: &str, v: &L0Vector<K>) -> String {
    let mut out = format!("\nvector {name}\n");
    for (w, atom) in v.space().atoms().iter().enumerate() {
        let vals: Vec<String> = v.fiber(w).iter().map(Scalar::render).collect();
        let _ = writeln!(out, "{}: {}", atom.id, vals.join(", "));
    }
    out
}

pub fn render_scalar<K: Scalar>(name: &str, s: &L0Scalar<K>) -> String {
    let mut out = format!("\nscalar {name}\n");
    for (atom, v) in s.space().atoms().iter().zip(s.values()) {
        let _ = writeln!(out, "{}: {}", atom.id, v.render());
    }
    out
}

pub fn render_event(e: &Event) -> String {
    e.ids().join(",")
}

pub fn render_space(space: &Space) -> String {
    let mut out = String::new();
    for a in space.atoms() {
        let _ = writeln!(out, "{} {}", a.id, a.prob.render());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational, RealScalar};

    const SPACE: &str = "# two atoms\na1 1/2\na2 0.5\n";

    #[test]
    fn parses_space_and_bundle() {
        let s = parse_space("space.txt", SPACE, None).unwrap();
        assert_eq!(s.len(), 2);
        let d = parse_data("g.txt", "vector x1\na1: 1, 0\na2: 1/2, -3\n\nscalar beta\na1: 1\na2: 2\nk = v w\n").unwrap();
        let v: Vec<L0Vector<Rational>> = d.vectors(&s).unwrap();
        assert_eq!(v[0].fiber(1), vec![Rational::from_ratio(1, 2), Rational::from_ratio(-3, 1)]);
        assert_eq!(d.meta("k"), Some("v w"));
        assert!(!d.has_complex());
    }

    #[test]
    fn probability_sum_error() {
        let e = parse_space("space.txt", "a 0.4\nb 0.5\n", None).unwrap_err();
        assert!(e.to_string().contains("probabilities must sum to 1"), "{e}");
        assert!(e.to_string().starts_with("space.txt"));
    }

    #[test]
    fn length_mismatch_names_file() {
        let s = parse_space("space.txt", SPACE, None).unwrap();
        let d = parse_data("beta.txt", "scalar beta\na1: 1\na2: 1\na3: 1\n").unwrap();
        let e = d.scalars::<Rational>(&s).unwrap_err();
        assert!(e.to_string().starts_with("beta.txt"), "{e}");
        let d = parse_data("beta.txt", "scalar beta\na1: 1\na2: 1, 2\n").unwrap();
        let e = d.scalars::<Rational>(&s).unwrap_err();
        assert_eq!(
            e,
            InputError::Atom {
                file: "beta.txt".into(),
                line: 3,
                atom: "a2".into(),
                message: "scalar needs 1 value, found 2".into()
            }
        );
    }

    #[test]
    fn bad_literal_names_line_and_atom() {
        let s = parse_space("space.txt", SPACE, None).unwrap();
        let d = parse_data("x.txt", "vector x\na1: 1, 2\na2: 1, two\n").unwrap();
        let e = d.vectors::<Rational>(&s).unwrap_err().to_string();
        assert!(e.starts_with("x.txt:3: atom `a2`"), "{e}");
    }

    #[test]
    fn round_trip_exact() {
        let s = parse_space("space.txt", SPACE, None).unwrap();
        let c = |a: i64, b: i64| GaussianRational::new(Rational::from_ratio(a, 3), Rational::from_ratio(b, 1));
        let v = L0Vector::from_fibers(&s, &[vec![c(1, 0), c(-2, 5)], vec![c(0, -1), c(7, 2)]]).unwrap();
        let text = render_vector("v", &v);
        let d = parse_data("r.txt", &text).unwrap();
        assert!(d.has_complex());
        assert_eq!(d.vectors::<GaussianRational>(&s).unwrap()[0], v);
        let sc = L0Scalar::new(&s, vec![Rational::from_ratio(-7, 9), Rational::from_ratio(0, 1)]).unwrap();
        let d = parse_data("r.txt", &render_scalar("s", &sc)).unwrap();
        assert_eq!(d.scalars::<Rational>(&s).unwrap()[0], sc);
        assert_eq!(parse_space("s", &render_space(&s), None).unwrap().atoms(), s.atoms());
    }
}
