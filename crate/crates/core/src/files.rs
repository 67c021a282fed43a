//! JSON group files and class files.

use serde::{Deserialize, Serialize};

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polyvector::{strictly_increasing, Polyvector};
use crate::scalars::CycScalar;

pub const DEFAULT_BOUND: usize = 10_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GroupFile {
    pub dimension: usize,
    #[serde(default = "one")]
    pub cyclotomic_order: u32,
    /// Row-major matrices of scalar strings; column `i` is the image of `x_i`.
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Index(usize),
    Word(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassTerm {
    pub group: GroupRef,
    pub coeff: String,
    pub exponents: Vec<u32>,
    /// 1-based, strictly increasing.
    pub wedge: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ClassFile {
    pub homological_degree: usize,
    pub terms: Vec<ClassTerm>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<GroupFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<Group> {
        let n = self.dimension;
        if self.cyclotomic_order == 0 {
            return Err(Error::usage("cyclotomicOrder must be positive"));
        }
        let mut mats = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            if g.len() != n || g.iter().any(|row| row.len() != n) {
                return Err(Error::usage(format!("generator {} is not {n}x{n}", gi + 1)));
            }
            let mut rows = Vec::new();
            for (r, row) in g.iter().enumerate() {
                let mut out = Vec::new();
                for (c, s) in row.iter().enumerate() {
                    let x = CycScalar::parse(s, self.cyclotomic_order).map_err(|e| match e {
                        Error::Parse { pos, msg } => Error::parse(
                            pos,
                            format!("generator {} entry ({}, {}) '{s}': {msg}", gi + 1, r + 1, c + 1),
                        ),
                        other => other,
                    })?;
                    out.push(x);
                }
                rows.push(out);
            }
            mats.push(Matrix::from_rows(rows));
        }
        if mats.is_empty() {
            mats.push(Matrix::identity(n));
        }
        Group::enumerate(mats, self.names.clone(), self.bound.unwrap_or(DEFAULT_BOUND))
    }
}

pub fn load_group(text: &str) -> Result<Group> {
    GroupFile::parse(text)?.build()
}

impl ClassFile {
    pub fn parse(text: &str) -> Result<ClassFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_cochain(&self, group: &Group) -> Result<Cochain> {
        let n = group.dim;
        let p = self.homological_degree;
        let mut c = Cochain::zero(p);
        for (ti, t) in self.terms.iter().enumerate() {
            let g = match &t.group {
                GroupRef::Index(i) if *i < group.order() => *i,
                GroupRef::Index(i) => return Err(Error::usage(format!("term {}: element index {i} out of range", ti + 1))),
                GroupRef::Word(w) => group.resolve_word(w)?,
            };
            if t.exponents.len() != n {
                return Err(Error::usage(format!("term {}: exponents must have length {n}", ti + 1)));
            }
            if t.wedge.len() != p {
                return Err(Error::usage(format!("term {}: wedge must have length {p}", ti + 1)));
            }
            if t.wedge.iter().any(|&i| i == 0 || i > n) || !strictly_increasing(&t.wedge) {
                return Err(Error::usage(format!("term {}: wedge must be strictly increasing in 1..={n}", ti + 1)));
            }
            let coeff = CycScalar::parse(&t.coeff, group.field_order)
                .map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(pos, format!("term {} coeff '{}': {msg}", ti + 1, t.coeff)),
                    other => other,
                })?;
            let key = t.wedge.iter().map(|i| i - 1).collect();
            c.add_component(g, Polyvector::term(key, Poly::monomial(t.exponents.clone(), coeff)));
        }
        Ok(c)
    }

    pub fn from_cochain(c: &Cochain, group: &Group) -> ClassFile {
        let mut terms = Vec::new();
        for (&g, x) in c.components() {
            for (key, p) in x.terms() {
                for (e, coeff) in p.terms() {
                    terms.push(ClassTerm {
                        group: GroupRef::Word(group.word_string(g)),
                        coeff: coeff.to_string(),
                        exponents: e.clone(),
                        wedge: key.iter().map(|i| i + 1).collect(),
                    });
                }
            }
        }
        ClassFile { homological_degree: c.degree, terms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn load_class(text: &str, group: &Group) -> Result<Cochain> {
    ClassFile::parse(text)?.to_cochain(group)
}
