//! Text records for fitted models.
//!
//! A record is a sequence of `key<TAB>field<TAB>field...` lines. Cut members
//! are written as node paths and real values with enough digits to parse
//! back bit-exactly. A tree cut model is
//!
//! ```text
//! cut     ANIMAL/BIRD     ANIMAL/INSECT
//! q       8.0000000000000004e-1   2.0000000000000001e-1
//! N       10
//! ```
//!
//! An association model adds `head`, `slot` and `size` and stores its
//! values under `A`. A pair record holds the association lines, the
//! marginal under `marginal.cut`, `marginal.q` and `marginal.N`, and the
//! stochastic residual. A planted record adds `seed`, `schedule` and
//! `background`. Lines starting with `#` are ignored.

use crate::atcm::{AssociationTreeCutModel, TreeCutPairModel};
use crate::corpus::HeadKey;
use crate::error::EstimationError;
use crate::oracle::PlantedModel;
use crate::scalar::{format_exact, Scalar};
use crate::taxonomy::{Taxonomy, TaxonomyError, TreeCut};
use crate::tcm::TreeCutModel;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing field {0:?}")]
    Missing(&'static str),
    #[error("field {key:?}: cannot parse {value:?}")]
    Value { key: String, value: String },
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
}

struct Record<'a> {
    fields: HashMap<&'a str, Vec<&'a str>>,
}

impl<'a> Record<'a> {
    fn parse(text: &'a str) -> Result<Self, FormatError> {
        let mut fields = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let key = parts.next().unwrap_or_default();
            let values: Vec<&str> = parts.collect();
            if fields.insert(key, values).is_some() {
                return Err(FormatError::Syntax {
                    line: i + 1,
                    message: format!("repeated key {key:?}"),
                });
            }
        }
        Ok(Record { fields })
    }

    fn list(&self, key: &'static str) -> Result<&[&'a str], FormatError> {
        self.fields
            .get(key)
            .map(Vec::as_slice)
            .ok_or(FormatError::Missing(key))
    }

    fn single(&self, key: &'static str) -> Result<&'a str, FormatError> {
        match self.list(key)? {
            [v] => Ok(v),
            other => Err(FormatError::Value {
                key: key.into(),
                value: other.join("\t"),
            }),
        }
    }

    fn number<N: std::str::FromStr>(&self, key: &'static str) -> Result<N, FormatError> {
        let v = self.single(key)?;
        parse_value(key, v)
    }

    fn numbers<N: std::str::FromStr>(&self, key: &'static str) -> Result<Vec<N>, FormatError> {
        self.list(key)?
            .iter()
            .map(|v| parse_value(key, v))
            .collect()
    }

    fn cut(&self, t: &Taxonomy, key: &'static str) -> Result<TreeCut, FormatError> {
        Ok(t.cut_from_paths(self.list(key)?.iter().copied())?)
    }
}

fn parse_value<N: std::str::FromStr>(key: &str, v: &str) -> Result<N, FormatError> {
    v.parse().map_err(|_| FormatError::Value {
        key: key.into(),
        value: v.into(),
    })
}

fn line(out: &mut String, key: &str, fields: impl IntoIterator<Item = String>) {
    out.push_str(key);
    for f in fields {
        out.push('\t');
        out.push_str(&f);
    }
    out.push('\n');
}

fn paths(t: &Taxonomy, cut: &TreeCut) -> Vec<String> {
    cut.members().iter().map(|&m| t.path(m)).collect()
}

fn values<T: Scalar>(v: &[T]) -> Vec<String> {
    v.iter().map(|&x| format_exact(x)).collect()
}

fn write_marginal<T: Scalar>(out: &mut String, prefix: &str, t: &Taxonomy, m: &TreeCutModel<T>) {
    line(out, &format!("{prefix}cut"), paths(t, m.cut()));
    line(out, &format!("{prefix}q"), values(m.q()));
    line(out, &format!("{prefix}N"), [m.sample_size().to_string()]);
}

fn write_assoc<T: Scalar>(out: &mut String, t: &Taxonomy, a: &AssociationTreeCutModel<T>) {
    line(out, "head", [a.key().head.clone()]);
    line(out, "slot", [a.key().slot.clone()]);
    line(out, "size", [a.slice_size().to_string()]);
    line(out, "cut", paths(t, a.cut()));
    line(out, "A", values(a.values()));
}

fn write_pair_lines<T: Scalar>(out: &mut String, t: &Taxonomy, p: &TreeCutPairModel<T>) {
    write_assoc(out, t, p.assoc());
    write_marginal(out, "marginal.", t, p.marginal());
    line(out, "residual", [format_exact(p.stochastic_residual(t))]);
}

/// Serializes a tree cut model.
pub fn write_tcm<T: Scalar>(t: &Taxonomy, m: &TreeCutModel<T>) -> String {
    let mut out = String::new();
    write_marginal(&mut out, "", t, m);
    out
}

/// Serializes an association model.
pub fn write_atcm<T: Scalar>(t: &Taxonomy, a: &AssociationTreeCutModel<T>) -> String {
    let mut out = String::new();
    write_assoc(&mut out, t, a);
    out
}

/// Serializes a pair model together with its stochastic residual.
pub fn write_pair<T: Scalar>(t: &Taxonomy, p: &TreeCutPairModel<T>) -> String {
    let mut out = String::new();
    write_pair_lines(&mut out, t, p);
    out
}

/// Serializes a planted model.
pub fn write_planted<T: Scalar>(t: &Taxonomy, pm: &PlantedModel<T>) -> String {
    let mut out = String::new();
    write_pair_lines(&mut out, t, &pm.model);
    line(&mut out, "seed", [pm.seed.to_string()]);
    line(&mut out, "schedule", pm.schedule.iter().map(u64::to_string));
    let _ = writeln!(out, "background\t{}", pm.background_size);
    out
}

fn read_marginal_from<T: Scalar>(
    r: &Record,
    t: &Taxonomy,
    keys: [&'static str; 3],
) -> Result<TreeCutModel<T>, FormatError> {
    let cut = r.cut(t, keys[0])?;
    Ok(TreeCutModel::new(
        t,
        cut,
        r.numbers(keys[1])?,
        r.number(keys[2])?,
    )?)
}

fn read_assoc_from<T: Scalar>(
    r: &Record,
    t: &Taxonomy,
) -> Result<AssociationTreeCutModel<T>, FormatError> {
    let key = HeadKey::new(r.single("head")?, r.single("slot")?);
    let cut = r.cut(t, "cut")?;
    Ok(AssociationTreeCutModel::new(
        t,
        key,
        cut,
        r.numbers("A")?,
        r.number("size")?,
    )?)
}

fn read_pair_from<T: Scalar>(r: &Record, t: &Taxonomy) -> Result<TreeCutPairModel<T>, FormatError> {
    let assoc = read_assoc_from(r, t)?;
    let marginal = read_marginal_from(r, t, ["marginal.cut", "marginal.q", "marginal.N"])?;
    r.single("residual")?;
    Ok(TreeCutPairModel::new_unchecked(assoc, marginal))
}

/// Parses a tree cut model against `t`.
pub fn read_tcm<T: Scalar>(t: &Taxonomy, text: &str) -> Result<TreeCutModel<T>, FormatError> {
    read_marginal_from(&Record::parse(text)?, t, ["cut", "q", "N"])
}

/// Parses an association model against `t`.
pub fn read_atcm<T: Scalar>(
    t: &Taxonomy,
    text: &str,
) -> Result<AssociationTreeCutModel<T>, FormatError> {
    read_assoc_from(&Record::parse(text)?, t)
}

/// Parses a pair model against `t`. The recorded residual is informational
/// and not checked.
pub fn read_pair<T: Scalar>(t: &Taxonomy, text: &str) -> Result<TreeCutPairModel<T>, FormatError> {
    read_pair_from(&Record::parse(text)?, t)
}

/// Parses a planted model against `t`.
pub fn read_planted<T: Scalar>(t: &Taxonomy, text: &str) -> Result<PlantedModel<T>, FormatError> {
    let r = Record::parse(text)?;
    Ok(PlantedModel {
        model: read_pair_from(&r, t)?,
        seed: r.number("seed")?,
        schedule: r.numbers("schedule")?,
        background_size: r.number("background")?,
    })
}
