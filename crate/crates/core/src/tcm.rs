//! Tree cut models of a distribution over leaf words.
//!
//! A model `(cut, q)` spreads the probability `q(C)` of each cut class evenly
//! over the leaves of `C`. [`find_mdl`] picks the cut whose two-part code
//! (half `log2 N` bits per class plus the data code length) is shortest.

use crate::corpus::ClassCounts;
use crate::error::EstimationError;
use crate::scalar::Scalar;
use crate::taxonomy::{NodeId, Taxonomy, TreeCut};

/// Knobs shared by the two MDL searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions<T> {
    /// Lower bound applied to the marginal probability of a class before it
    /// divides the conditional estimate. Off by default.
    pub epsilon_floor: Option<T>,
    /// Extra parameters charged per cut class. Always 0 in normal use; the
    /// verification suite sets it to check that a wrong penalty is caught.
    pub extra_params: u32,
}

impl<T> Default for SearchOptions<T> {
    fn default() -> Self {
        SearchOptions {
            epsilon_floor: None,
            extra_params: 0,
        }
    }
}

impl<T: Scalar> SearchOptions<T> {
    pub fn with_epsilon(eps: T) -> Self {
        SearchOptions {
            epsilon_floor: Some(eps),
            ..Default::default()
        }
    }

    /// Bits charged for each class of a cut fitted on `n` observations.
    pub(crate) fn penalty(&self, n: u64) -> T {
        T::half() * T::from_count(n).log2() * T::from_count(1 + u64::from(self.extra_params))
    }
}

/// A tree cut with a probability per member.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCutModel<T> {
    cut: TreeCut,
    q: Vec<T>,
    sample_size: u64,
}

impl<T: Scalar> TreeCutModel<T> {
    /// Checks the cut and that `q` is a distribution over its members.
    /// The members may be given in any order.
    pub fn new(
        t: &Taxonomy,
        cut: TreeCut,
        q: Vec<T>,
        sample_size: u64,
    ) -> Result<Self, EstimationError> {
        if q.len() != cut.len() {
            return Err(EstimationError::LengthMismatch {
                what: "probabilities",
                expected: cut.len(),
                got: q.len(),
            });
        }
        if let Some(&bad) = q.iter().find(|x| !(x.is_finite() && **x >= T::zero())) {
            return Err(EstimationError::BadValue {
                what: "probability",
                value: bad.to_f64().unwrap_or(f64::NAN),
            });
        }
        let sum: T = q.iter().copied().sum();
        if (sum - T::one()).abs() > T::stochastic_tolerance() {
            return Err(EstimationError::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (cut, q) = canonical_pairs(t, cut, q)?;
        Ok(TreeCutModel {
            cut,
            q,
            sample_size,
        })
    }

    pub fn cut(&self) -> &TreeCut {
        &self.cut
    }

    /// Class probabilities, aligned with `cut().members()`.
    pub fn q(&self) -> &[T] {
        &self.q
    }

    /// Number of observations the model was fitted on.
    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// Per-word probability `q(C) / |C|`.
    pub fn probability(&self, t: &Taxonomy, word: &str) -> Result<T, EstimationError> {
        let leaf = t
            .leaf(word)
            .ok_or_else(|| crate::taxonomy::TaxonomyError::UnknownWord(word.to_string()))?;
        Ok(self.leaf_probability(t, leaf))
    }

    pub(crate) fn leaf_probability(&self, t: &Taxonomy, leaf: NodeId) -> T {
        let i = t
            .covering_member(&self.cut, leaf)
            .expect("a valid cut covers every leaf");
        self.q[i] / T::from_usize(t.leaf_count(self.cut.members()[i])).unwrap()
    }
}

/// Sorts `values` along with the members of `cut` after validating it.
pub(crate) fn canonical_pairs<T: Copy>(
    t: &Taxonomy,
    cut: TreeCut,
    values: Vec<T>,
) -> Result<(TreeCut, Vec<T>), EstimationError> {
    let mut pairs: Vec<(NodeId, T)> = cut.members().iter().copied().zip(values).collect();
    pairs.sort_by_key(|(m, _)| t.preorder_index(*m));
    let cut = t.cut(pairs.iter().map(|(m, _)| *m))?;
    Ok((cut, pairs.into_iter().map(|(_, v)| v).collect()))
}

/// Maximum likelihood model on a fixed cut: `q(C) = #(C) / N`.
pub fn mle_tcm<T: Scalar>(
    t: &Taxonomy,
    cut: &TreeCut,
    counts: &ClassCounts,
) -> Result<TreeCutModel<T>, EstimationError> {
    let n = counts.total(t);
    if n == 0 {
        return Err(EstimationError::EmptySample);
    }
    let cut = t.cut(cut.members().iter().copied())?;
    let q = cut
        .members()
        .iter()
        .map(|&m| T::from_count(counts.get(m)) / T::from_count(n))
        .collect();
    Ok(TreeCutModel {
        cut,
        q,
        sample_size: n,
    })
}

#[inline]
fn class_bits<T: Scalar>(k: u64, n: u64, size: usize) -> T {
    if k == 0 {
        return T::zero();
    }
    let p = T::from_count(k) / (T::from_count(n) * T::from_usize(size).unwrap());
    T::code_length(k, p)
}

/// Description length in bits of the counts under the maximum likelihood
/// model on `cut`: `sum_C #(C) * -log2(q(C) / |C|) + (|cut| / 2) log2 n`.
pub fn tcm_description_length<T: Scalar>(
    t: &Taxonomy,
    cut: &TreeCut,
    counts: &ClassCounts,
    n: u64,
) -> Result<T, EstimationError> {
    if n == 0 {
        return Err(EstimationError::EmptySample);
    }
    t.validate_cut(cut)
        .map_err(crate::taxonomy::TaxonomyError::InvalidCut)?;
    let data: T = cut
        .members()
        .iter()
        .map(|&m| class_bits::<T>(counts.get(m), n, t.leaf_count(m)))
        .sum();
    Ok(data + T::from_usize(cut.len()).unwrap() * T::half() * T::from_count(n).log2())
}

/// Minimum description length tree cut model for `counts`, with
/// `N = counts.total()`.
pub fn find_mdl<T: Scalar>(
    t: &Taxonomy,
    counts: &ClassCounts,
) -> Result<TreeCutModel<T>, EstimationError> {
    find_mdl_with(t, counts, &SearchOptions::default()).map(|(m, _)| m)
}

/// [`find_mdl`] that also returns the winning description length.
pub fn find_mdl_with<T: Scalar>(
    t: &Taxonomy,
    counts: &ClassCounts,
    opts: &SearchOptions<T>,
) -> Result<(TreeCutModel<T>, T), EstimationError> {
    let n = counts.total(t);
    if n == 0 {
        return Err(EstimationError::EmptySample);
    }
    let penalty = opts.penalty(n);
    let (cut, bits) = best_cut(t, |id| {
        Ok::<_, std::convert::Infallible>(
            class_bits::<T>(counts.get(id), n, t.leaf_count(id)) + penalty,
        )
    })?;
    let q = cut
        .members()
        .iter()
        .map(|&m| T::from_count(counts.get(m)) / T::from_count(n))
        .collect();
    Ok((
        TreeCutModel {
            cut,
            q,
            sample_size: n,
        },
        bits,
    ))
}

/// Bottom-up search shared by both estimators. `collapsed(id)` is the cost of
/// keeping `id` as a single class. A node is kept whole only when that is
/// strictly cheaper than the best cuts of its children combined.
pub(crate) fn best_cut<T: Scalar, E>(
    t: &Taxonomy,
    mut collapsed: impl FnMut(NodeId) -> Result<T, E>,
) -> Result<(TreeCut, T), E> {
    let mut best = vec![T::zero(); t.len()];
    let mut whole = vec![false; t.len()];
    for &id in t.preorder().iter().rev() {
        let own = collapsed(id)?;
        let kids = t.children(id);
        if kids.is_empty() {
            best[id.index()] = own;
            whole[id.index()] = true;
        } else {
            let split: T = kids.iter().map(|c| best[c.index()]).sum();
            if own < split {
                best[id.index()] = own;
                whole[id.index()] = true;
            } else {
                best[id.index()] = split;
            }
        }
    }
    let mut members = Vec::new();
    let mut stack = vec![t.root()];
    while let Some(id) = stack.pop() {
        if whole[id.index()] {
            members.push(id);
        } else {
            stack.extend(t.children(id).iter().rev());
        }
    }
    Ok((TreeCut::new(members), best[t.root().index()]))
}

impl From<std::convert::Infallible> for EstimationError {
    fn from(e: std::convert::Infallible) -> Self {
        match e {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::ValueCounts;

    fn birds() -> Taxonomy {
        Taxonomy::parse("(BIRD swallow crow robin)").unwrap()
    }

    fn counts(t: &Taxonomy, pairs: &[(&str, u64)]) -> ClassCounts {
        let vc: ValueCounts = pairs.iter().map(|(w, c)| (w.to_string(), *c)).collect();
        ClassCounts::new(t, &vc)
    }

    const MARGINAL: &[(&str, u64)] = &[("swallow", 42), ("crow", 66), ("robin", 9)];

    #[test]
    fn uniform_sharing() {
        let t = Taxonomy::parse("(ANIMAL (BIRD swallow crow robin) (INSECT bee bug))").unwrap();
        let bird = t.parent(t.leaf("crow").unwrap()).unwrap();
        let insect = t.parent(t.leaf("bee").unwrap()).unwrap();
        let m =
            TreeCutModel::new(&t, TreeCut::new(vec![insect, bird]), vec![0.4f64, 0.6], 10).unwrap();
        assert!((m.probability(&t, "swallow").unwrap() - 0.2).abs() < 1e-15);
        assert!((m.probability(&t, "bug").unwrap() - 0.2).abs() < 1e-15);
        let total: f64 = t
            .leaves()
            .iter()
            .map(|&l| m.probability(&t, t.label(l)).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(m.probability(&t, "whale").is_err());

        let leaf_model =
            TreeCutModel::new(&t, t.leaf_cut(), vec![0.1, 0.2, 0.3, 0.25, 0.15], 10).unwrap();
        assert_eq!(leaf_model.probability(&t, "robin").unwrap(), 0.3);
    }

    #[test]
    fn model_invariants_are_checked() {
        let t = birds();
        assert!(matches!(
            TreeCutModel::new(&t, t.root_cut(), vec![0.5f64], 1),
            Err(EstimationError::NotNormalized { .. })
        ));
        assert!(matches!(
            TreeCutModel::new(&t, t.leaf_cut(), vec![1.5f64, -0.5, 0.0], 1),
            Err(EstimationError::BadValue { .. })
        ));
        assert!(matches!(
            TreeCutModel::new(&t, t.leaf_cut(), vec![1.0f64], 1),
            Err(EstimationError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mle_on_fixed_cuts() {
        let t = birds();
        let c = counts(&t, MARGINAL);
        let m = mle_tcm::<f64>(&t, &t.leaf_cut(), &c).unwrap();
        assert_eq!(m.q(), &[42.0 / 117.0, 66.0 / 117.0, 9.0 / 117.0]);
        let root = mle_tcm::<f64>(&t, &t.root_cut(), &c).unwrap();
        assert_eq!(root.q(), &[1.0]);
        let one = mle_tcm::<f64>(&t, &t.leaf_cut(), &counts(&t, &[("crow", 5)])).unwrap();
        assert_eq!(one.q(), &[0.0, 1.0, 0.0]);
        assert_eq!(
            mle_tcm::<f64>(&t, &t.leaf_cut(), &counts(&t, &[])),
            Err(EstimationError::EmptySample)
        );
    }

    #[test]
    fn description_lengths_of_bird_cuts() {
        let t = birds();
        let c = counts(&t, MARGINAL);
        let leaf: f64 = tcm_description_length(&t, &t.leaf_cut(), &c, 117).unwrap();
        let root: f64 = tcm_description_length(&t, &t.root_cut(), &c, 117).unwrap();
        // 149.891 data + 10.306 penalty; 185.441 + 3.435
        assert!((leaf - 160.201_550_623_286_78).abs() < 1e-6, "{leaf}");
        assert!((root - 188.875_794_944_166_96).abs() < 1e-6, "{root}");
        let single = Taxonomy::parse("(x)").unwrap();
        let one = counts(&single, &[("x", 1)]);
        assert_eq!(
            tcm_description_length::<f64>(&single, &single.root_cut(), &one, 1).unwrap(),
            0.0
        );
    }

    #[test]
    fn find_mdl_prefers_leaves_for_skewed_birds() {
        let t = birds();
        let (m, bits) =
            find_mdl_with::<f64>(&t, &counts(&t, MARGINAL), &SearchOptions::default()).unwrap();
        assert_eq!(m.cut(), &t.leaf_cut());
        assert!((bits - 160.201_550_623_286_78).abs() < 1e-6);
    }

    #[test]
    fn find_mdl_collapses_uniform_counts() {
        let t = Taxonomy::parse("(R (A a b) (B c d))").unwrap();
        let c = counts(&t, &[("a", 25), ("b", 25), ("c", 25), ("d", 25)]);
        let (m, bits) = find_mdl_with::<f64>(&t, &c, &SearchOptions::default()).unwrap();
        assert_eq!(m.cut(), &t.root_cut());
        // 100 * log2(4) + 0.5 * log2(100)
        assert!((bits - (200.0 + 0.5 * 100f64.log2())).abs() < 1e-9);
        assert_eq!(m.q(), &[1.0]);
    }

    #[test]
    fn find_mdl_single_leaf() {
        let t = Taxonomy::parse("(x)").unwrap();
        let m = find_mdl::<f64>(&t, &counts(&t, &[("x", 3)])).unwrap();
        assert_eq!(m.cut(), &t.root_cut());
        assert_eq!(m.q(), &[1.0]);
    }

    #[test]
    fn ties_keep_the_finer_cut() {
        // a unary node costs exactly what its only child costs
        let t = Taxonomy::parse("(R a)").unwrap();
        let (m, _) =
            find_mdl_with::<f64>(&t, &counts(&t, &[("a", 4)]), &SearchOptions::default()).unwrap();
        assert_eq!(m.cut(), &t.leaf_cut());
    }

    #[test]
    fn generic_over_f32() {
        let t = birds();
        let m = find_mdl::<f32>(&t, &counts(&t, MARGINAL)).unwrap();
        assert_eq!(m.cut(), &t.leaf_cut());
        let sum: f32 = m.q().iter().sum();
        assert!((sum - 1.0).abs() < 1e-6);
    }
}
