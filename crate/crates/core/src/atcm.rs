//! Association tree cut models and tree cut pair models.
//!
//! An association model assigns one association value `A(C, v)` to every
//! class of a cut; paired with a marginal tree cut model `p` it defines the
//! conditional distribution `h(n | v) = A(n, v) * p(n)`. Estimation runs in two
//! steps: [`find_mdl`](crate::tcm::find_mdl) on the whole sample for `p`, then
//! [`find_assoc_mdl`] on the head's slice for `A`.
//!
//! The marginal is extended from its own cut to arbitrary nodes by
//! [`extend_p_hat`]: a node on the cut keeps its probability, a node above the
//! cut sums its children, and a node below a cut class gets the share of that
//! class proportional to its number of leaves.

use crate::corpus::{ClassCounts, HeadKey, HeadSlice, PairSample};
use crate::error::EstimationError;
use crate::scalar::Scalar;
use crate::taxonomy::{NodeId, Taxonomy, TaxonomyError, TreeCut};
use crate::tcm::{best_cut, canonical_pairs, find_mdl, SearchOptions, TreeCutModel};
use rayon::prelude::*;

/// Marginal probability of the class of `node` under `m`.
pub fn extend_p_hat<T: Scalar>(
    m: &TreeCutModel<T>,
    t: &Taxonomy,
    node: NodeId,
) -> Result<T, EstimationError> {
    t.check(node)?;
    let members = m.cut().members();
    if let Some(i) = t.covering_member(m.cut(), node) {
        let share = T::from_usize(t.leaf_count(node)).unwrap()
            / T::from_usize(t.leaf_count(members[i])).unwrap();
        return Ok(if members[i] == node {
            m.q()[i]
        } else {
            share * m.q()[i]
        });
    }
    // node lies strictly above the cut: sum the members beneath it
    Ok(members
        .iter()
        .zip(m.q())
        .filter(|(&c, _)| t.dominates(node, c))
        .map(|(_, &q)| q)
        .sum())
}

/// [`extend_p_hat`] for every node at once, in `O(|t|)`.
#[derive(Debug, Clone)]
pub struct MarginalTable<T> {
    p_hat: Vec<T>,
}

impl<T: Scalar> MarginalTable<T> {
    pub fn new(m: &TreeCutModel<T>, t: &Taxonomy) -> Self {
        let mut p_hat = vec![T::zero(); t.len()];
        // covering cut member, per node, for nodes on or below the cut
        let mut cover: Vec<Option<usize>> = vec![None; t.len()];
        for (i, &c) in m.cut().members().iter().enumerate() {
            cover[c.index()] = Some(i);
        }
        for &id in t.preorder() {
            if cover[id.index()].is_none() {
                if let Some(p) = t.parent(id) {
                    cover[id.index()] = cover[p.index()];
                }
            }
            if let Some(i) = cover[id.index()] {
                let c = m.cut().members()[i];
                p_hat[id.index()] = if c == id {
                    m.q()[i]
                } else {
                    T::from_usize(t.leaf_count(id)).unwrap()
                        / T::from_usize(t.leaf_count(c)).unwrap()
                        * m.q()[i]
                };
            }
        }
        for &id in t.preorder().iter().rev() {
            if cover[id.index()].is_none() {
                p_hat[id.index()] = t.children(id).iter().map(|c| p_hat[c.index()]).sum();
            }
        }
        MarginalTable { p_hat }
    }

    #[inline]
    pub fn get(&self, id: NodeId) -> T {
        self.p_hat[id.index()]
    }

    /// Value used as the divisor of the conditional estimate.
    #[inline]
    fn divisor(&self, id: NodeId, floor: Option<T>) -> T {
        let p = self.get(id);
        match floor {
            Some(eps) => p.max(eps),
            None => p,
        }
    }
}

/// A cut with a nonnegative association value per member, fitted for one
/// head-key.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationTreeCutModel<T> {
    key: HeadKey,
    cut: TreeCut,
    a: Vec<T>,
    slice_size: u64,
}

impl<T: Scalar> AssociationTreeCutModel<T> {
    pub fn new(
        t: &Taxonomy,
        key: HeadKey,
        cut: TreeCut,
        a: Vec<T>,
        slice_size: u64,
    ) -> Result<Self, EstimationError> {
        if a.len() != cut.len() {
            return Err(EstimationError::LengthMismatch {
                what: "association values",
                expected: cut.len(),
                got: a.len(),
            });
        }
        if let Some(&bad) = a.iter().find(|x| !(x.is_finite() && **x >= T::zero())) {
            return Err(EstimationError::BadValue {
                what: "association value",
                value: bad.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (cut, a) = canonical_pairs(t, cut, a)?;
        Ok(AssociationTreeCutModel {
            key,
            cut,
            a,
            slice_size,
        })
    }

    pub fn key(&self) -> &HeadKey {
        &self.key
    }

    pub fn cut(&self) -> &TreeCut {
        &self.cut
    }

    /// Association values aligned with `cut().members()`.
    pub fn values(&self) -> &[T] {
        &self.a
    }

    /// `|S_v|` of the slice the model was fitted on.
    pub fn slice_size(&self) -> u64 {
        self.slice_size
    }

    /// `A` of the cut class containing `node`, if some member covers it.
    pub fn value_at(&self, t: &Taxonomy, node: NodeId) -> Option<T> {
        t.covering_member(&self.cut, node).map(|i| self.a[i])
    }

    pub fn value_for_word(&self, t: &Taxonomy, word: &str) -> Result<T, EstimationError> {
        let leaf = t
            .leaf(word)
            .ok_or_else(|| TaxonomyError::UnknownWord(word.to_string()))?;
        Ok(self.value_at(t, leaf).expect("valid cut covers every leaf"))
    }

    /// Same model with every value multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        AssociationTreeCutModel {
            a: self.a.iter().map(|&x| x * c).collect(),
            ..self.clone()
        }
    }
}

/// An association model together with the marginal it was fitted against.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCutPairModel<T> {
    assoc: AssociationTreeCutModel<T>,
    marginal: TreeCutModel<T>,
}

impl<T: Scalar> TreeCutPairModel<T> {
    /// Pairs the two models after checking `sum_C A(C) p(C) = 1`.
    pub fn new(
        t: &Taxonomy,
        assoc: AssociationTreeCutModel<T>,
        marginal: TreeCutModel<T>,
    ) -> Result<Self, EstimationError> {
        let pm = TreeCutPairModel { assoc, marginal };
        let residual = pm.stochastic_residual(t);
        if residual.is_nan() || residual.abs() > T::stochastic_tolerance() {
            return Err(EstimationError::NotStochastic {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(pm)
    }

    /// Pairs without checking normalization; used for rescaled models.
    pub fn new_unchecked(assoc: AssociationTreeCutModel<T>, marginal: TreeCutModel<T>) -> Self {
        TreeCutPairModel { assoc, marginal }
    }

    pub fn assoc(&self) -> &AssociationTreeCutModel<T> {
        &self.assoc
    }

    pub fn marginal(&self) -> &TreeCutModel<T> {
        &self.marginal
    }

    /// `sum_{C in assoc cut} A(C) * p_hat(C) - 1`.
    pub fn stochastic_residual(&self, t: &Taxonomy) -> T {
        let table = MarginalTable::new(&self.marginal, t);
        let total: T = self
            .assoc
            .cut
            .members()
            .iter()
            .zip(&self.assoc.a)
            .map(|(&c, &a)| a * table.get(c))
            .sum();
        total - T::one()
    }

    /// `h(word | v) = A(word, v) * p(word)`.
    pub fn conditional(&self, t: &Taxonomy, word: &str) -> Result<T, EstimationError> {
        let leaf = t
            .leaf(word)
            .ok_or_else(|| TaxonomyError::UnknownWord(word.to_string()))?;
        Ok(self.leaf_conditional(t, leaf))
    }

    pub(crate) fn leaf_conditional(&self, t: &Taxonomy, leaf: NodeId) -> T {
        self.assoc
            .value_at(t, leaf)
            .expect("valid cut covers every leaf")
            * self.marginal.leaf_probability(t, leaf)
    }

    /// Same pair with the association values multiplied by `c`; no longer
    /// normalized unless `c == 1`.
    pub fn scaled(&self, c: T) -> Self {
        TreeCutPairModel {
            assoc: self.assoc.scaled(c),
            marginal: self.marginal.clone(),
        }
    }
}

fn known_size(t: &Taxonomy, counts: &ClassCounts, key: &HeadKey) -> Result<u64, EstimationError> {
    match counts.total(t) {
        0 => Err(EstimationError::EmptySlice(key.clone())),
        n => Ok(n),
    }
}

fn assoc_value<T: Scalar>(
    t: &Taxonomy,
    id: NodeId,
    k: u64,
    size: u64,
    table: &MarginalTable<T>,
    floor: Option<T>,
) -> Result<T, EstimationError> {
    if k == 0 {
        return Ok(T::zero());
    }
    let p = table.divisor(id, floor);
    if p.is_nan() || p <= T::zero() {
        return Err(EstimationError::ZeroMarginal {
            label: t.label(id).to_string(),
            count: k,
        });
    }
    Ok(T::from_count(k) / T::from_count(size) / p)
}

/// Maximum likelihood association model on a fixed cut:
/// `h(C) = #(C, S_v) / |S_v|` and `A(C) = h(C) / p_hat(C)`.
///
/// Returns the model and the `h` values, aligned with its cut. Words of the
/// slice that are not in `t` are ignored and do not count towards `|S_v|`.
pub fn mle_pair<T: Scalar>(
    marginal: &TreeCutModel<T>,
    t: &Taxonomy,
    cut: &TreeCut,
    slice: &HeadSlice,
    opts: &SearchOptions<T>,
) -> Result<(AssociationTreeCutModel<T>, Vec<T>), EstimationError> {
    let counts = ClassCounts::new(t, &slice.counts);
    let size = known_size(t, &counts, &slice.key)?;
    let cut = t.cut(cut.members().iter().copied())?;
    let table = MarginalTable::new(marginal, t);
    let mut a = Vec::with_capacity(cut.len());
    let mut h = Vec::with_capacity(cut.len());
    for &c in cut.members() {
        let k = counts.get(c);
        h.push(T::from_count(k) / T::from_count(size));
        a.push(assoc_value(t, c, k, size, &table, opts.epsilon_floor)?);
    }
    Ok((
        AssociationTreeCutModel {
            key: slice.key.clone(),
            cut,
            a,
            slice_size: size,
        },
        h,
    ))
}

/// The A-dependent part of the description length of a slice:
/// `(|cut| / 2) log2 |S_v| + sum_C #(C, S_v) * -log2 A(C)`.
///
/// The `-log2 p_hat` part of the data code is the same for every cut and is
/// left out. A class with `A = 0` and a positive count makes the length
/// infinite.
pub fn assoc_description_length<T: Scalar>(
    atcm: &AssociationTreeCutModel<T>,
    t: &Taxonomy,
    slice: &HeadSlice,
) -> Result<T, EstimationError> {
    let counts = ClassCounts::new(t, &slice.counts);
    let size = known_size(t, &counts, &slice.key)?;
    let data: T = atcm
        .cut
        .members()
        .iter()
        .zip(&atcm.a)
        .map(|(&c, &a)| T::code_length(counts.get(c), a))
        .sum();
    Ok(data + T::from_usize(atcm.cut.len()).unwrap() * T::half() * T::from_count(size).log2())
}

/// Association model minimizing [`assoc_description_length`] over all cuts,
/// with the marginal held fixed.
pub fn find_assoc_mdl<T: Scalar>(
    slice: &HeadSlice,
    t: &Taxonomy,
    marginal: &TreeCutModel<T>,
) -> Result<AssociationTreeCutModel<T>, EstimationError> {
    let table = MarginalTable::new(marginal, t);
    find_assoc_mdl_with(slice, t, &table, &SearchOptions::default()).map(|(m, _)| m)
}

/// [`find_assoc_mdl`] against a precomputed marginal table; also returns the
/// winning description length.
pub fn find_assoc_mdl_with<T: Scalar>(
    slice: &HeadSlice,
    t: &Taxonomy,
    table: &MarginalTable<T>,
    opts: &SearchOptions<T>,
) -> Result<(AssociationTreeCutModel<T>, T), EstimationError> {
    let counts = ClassCounts::new(t, &slice.counts);
    let size = known_size(t, &counts, &slice.key)?;
    let penalty = opts.penalty(size);
    let mut a_hat = vec![T::zero(); t.len()];
    let (cut, bits) = best_cut(t, |id| {
        let k = counts.get(id);
        let a = assoc_value(t, id, k, size, table, opts.epsilon_floor)?;
        a_hat[id.index()] = a;
        Ok::<_, EstimationError>(T::code_length(k, a) + penalty)
    })?;
    let a = cut.members().iter().map(|c| a_hat[c.index()]).collect();
    Ok((
        AssociationTreeCutModel {
            key: slice.key.clone(),
            cut,
            a,
            slice_size: size,
        },
        bits,
    ))
}

/// Both estimation steps for one head-key: the marginal from every value in
/// `s`, then the association model from the head's slice.
pub fn assoc_mdl<T: Scalar>(
    t: &Taxonomy,
    s: &PairSample,
    key: &HeadKey,
) -> Result<TreeCutPairModel<T>, EstimationError> {
    let counts = ClassCounts::new(t, &s.project_values());
    let marginal = find_mdl::<T>(t, &counts)?;
    let slice = s.slice_by_head(key);
    let assoc = find_assoc_mdl(&slice, t, &marginal)?;
    TreeCutPairModel::new(t, assoc, marginal)
}

/// Fitted association model with its description length.
#[derive(Debug, Clone)]
pub struct HeadFit<T> {
    pub model: TreeCutPairModel<T>,
    pub bits: T,
}

/// Fits association models for many heads against one shared marginal, in
/// parallel. Results come back in the order of `keys`.
pub fn fit_heads<T: Scalar>(
    t: &Taxonomy,
    sample: &PairSample,
    marginal: &TreeCutModel<T>,
    keys: &[HeadKey],
    opts: &SearchOptions<T>,
) -> Vec<Result<HeadFit<T>, EstimationError>> {
    let table = MarginalTable::new(marginal, t);
    keys.par_iter()
        .map(|key| {
            let slice = sample.slice_by_head(key);
            let (assoc, bits) = find_assoc_mdl_with(&slice, t, &table, opts)?;
            let model = TreeCutPairModel::new(t, assoc, marginal.clone())?;
            Ok(HeadFit { model, bits })
        })
        .collect()
}
