//! Text format for externally supplied generators.
//!
//! ```text
//! # comment
//! 4 2 2 0            n, p, degree of GF(q²) over GF(p), frobenius allowed (0/1)
//! [1,0] [0,0] ...    n rows of n field elements per generator
//! frob 1             optional, before a matrix, only when frobenius is allowed
//! expect-order 25920 optional, last line
//! ```

use std::path::Path;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldSpec};
use crate::grp::{GroupHandle, SemilinearMap};
use crate::linalg::Matrix;

use super::builder::Builder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFile {
    pub n: usize,
    pub p: u32,
    /// Degree of GF(q²) over GF(p), i.e. 2f.
    pub degree: u32,
    pub frob_allowed: bool,
    pub generators: Vec<SemilinearMap>,
    pub expect_order: Option<BigUint>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl GeneratorFile {
    pub fn field(&self) -> Result<Field> {
        FieldSpec::new(self.p, self.degree / 2)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 {
            return Err(parse_err(hl, "header must be `n p degree frob-allowed`"));
        }
        let num = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| parse_err(hl, format!("bad number {s:?}")))
        };
        let n = num(h[0])? as usize;
        let p = num(h[1])?;
        let degree = num(h[2])?;
        let frob_allowed = match h[3] {
            "0" | "false" => false,
            "1" | "true" => true,
            other => return Err(parse_err(hl, format!("bad frob flag {other:?}"))),
        };
        if degree % 2 == 1 {
            return Err(parse_err(hl, "GF(q²) has even degree over GF(p)"));
        }
        let k = FieldSpec::new(p, degree / 2).map_err(|e| parse_err(hl, e.to_string()))?;
        let mut generators = Vec::new();
        let mut expect_order = None;
        let mut rows: Vec<Vec<crate::ff::FieldElt>> = Vec::new();
        let mut frob = 0i64;
        for (ln, line) in lines {
            if expect_order.is_some() {
                return Err(parse_err(ln, "content after expect-order"));
            }
            if let Some(rest) = line.strip_prefix("expect-order") {
                if !rows.is_empty() {
                    return Err(parse_err(ln, "incomplete matrix before expect-order"));
                }
                let o = rest
                    .trim()
                    .parse::<BigUint>()
                    .map_err(|_| parse_err(ln, "expect-order needs a decimal integer"))?;
                expect_order = Some(o);
                continue;
            }
            if let Some(rest) = line.strip_prefix("frob") {
                if !frob_allowed {
                    return Err(parse_err(
                        ln,
                        "frobenius part given but not allowed by header",
                    ));
                }
                if !rows.is_empty() {
                    return Err(parse_err(ln, "frob line inside a matrix"));
                }
                frob = rest
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| parse_err(ln, "frob needs an integer"))?;
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| k.parse(t))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| parse_err(ln, e.to_string()))?;
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            rows.push(row);
            if rows.len() == n {
                let mat = Matrix::from_rows(std::mem::take(&mut rows))?;
                let idx = generators.len();
                let g = SemilinearMap::new(&k, mat, frob).map_err(|e| match e {
                    Error::NotInvertible { .. } => Error::NotInvertible { index: idx },
                    other => other,
                })?;
                generators.push(g);
                frob = 0;
            }
        }
        if !rows.is_empty() {
            return Err(parse_err(text.lines().count(), "incomplete final matrix"));
        }
        Ok(GeneratorFile {
            n,
            p,
            degree,
            frob_allowed,
            generators,
            expect_order,
        })
    }

    pub fn to_text(&self) -> Result<String> {
        let k = self.field()?;
        let mut out = format!(
            "{} {} {} {}\n",
            self.n,
            self.p,
            self.degree,
            u8::from(self.frob_allowed)
        );
        for g in &self.generators {
            if g.frob() != 0 {
                out.push_str(&format!("frob {}\n", g.frob()));
            }
            for r in 0..self.n {
                let row: Vec<String> = g.matrix().row(r).iter().map(|&x| k.format(x)).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        if let Some(o) = &self.expect_order {
            out.push_str(&format!("expect-order {o}\n"));
        }
        Ok(out)
    }
}

/// Reads a generator file and builds the handle on the builder's domain.
pub fn import_generators(builder: &Builder, path: &Path) -> Result<GroupHandle> {
    let text = std::fs::read_to_string(path)?;
    let file = GeneratorFile::parse(&text)?;
    import_parsed(builder, &file, &path.display().to_string())
}

pub fn import_parsed(
    builder: &Builder,
    file: &GeneratorFile,
    provenance: &str,
) -> Result<GroupHandle> {
    let sp = builder.space();
    if file.n != sp.dim() {
        return Err(Error::Dimension {
            expected: sp.dim(),
            found: file.n,
        });
    }
    let k = sp.field();
    if file.p != k.p() || file.degree as usize != k.degree() {
        return Err(Error::usage(format!(
            "generator field GF({}^{}) does not match GF({}^{})",
            file.p,
            file.degree,
            k.p(),
            k.degree()
        )));
    }
    let h = builder.handle(&format!("imported:{provenance}"), file.generators.clone())?;
    if let Some(expected) = &file.expect_order {
        let computed = h.order();
        if &computed != expected {
            return Err(Error::OrderMismatch {
                expected: expected.to_string(),
                computed: computed.to_string(),
            });
        }
    }
    Ok(h)
}
