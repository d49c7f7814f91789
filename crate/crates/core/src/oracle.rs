//! Exhaustive counterparts of the fast estimators, planted-model data
//! generation, and the equivalence suite built from them.
//!
//! Everything here recomputes its quantities from leaf-level counts and the
//! per-word probabilities of the marginal, without going through
//! [`ClassCounts`](crate::corpus::ClassCounts) or
//! [`MarginalTable`](crate::atcm::MarginalTable).
//!
//! Random instances are reproducible: instance `i` of a run seeded with `s`
//! draws from `ChaCha8Rng::seed_from_u64(s + i)`. Random trees have 2 to 4
//! children per internal node (uniform), depth at most 4, and are redrawn
//! until they fit the leaf budget.

use crate::atcm::{
    find_assoc_mdl_with, mle_pair, AssociationTreeCutModel, MarginalTable, TreeCutPairModel,
};
use crate::corpus::{ClassCounts, HeadKey, HeadSlice, ValueCounts};
use crate::error::EstimationError;
use crate::scalar::Scalar;
use crate::taxonomy::{NodeId, NodeSpec, Taxonomy, TreeCut};
use crate::tcm::{find_mdl_with, SearchOptions, TreeCutModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Default leaf cap for exhaustive enumeration.
pub const DEFAULT_CAP: usize = 16;

fn check_cap(t: &Taxonomy, cap: usize) -> Result<(), EstimationError> {
    if t.num_leaves() > cap {
        Err(EstimationError::CapExceeded {
            leaves: t.num_leaves(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Every tree cut of `t`, each exactly once, members in left-to-right order.
pub fn enumerate_cuts(t: &Taxonomy, cap: usize) -> Result<Vec<TreeCut>, EstimationError> {
    check_cap(t, cap)?;
    fn cuts(t: &Taxonomy, id: NodeId) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![id]];
        if t.is_leaf(id) {
            return out;
        }
        let mut product: Vec<Vec<NodeId>> = vec![Vec::new()];
        for &c in t.children(id) {
            let sub = cuts(t, c);
            product = product
                .iter()
                .flat_map(|prefix| {
                    sub.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(s);
                        v
                    })
                })
                .collect();
        }
        out.extend(product);
        out
    }
    Ok(cuts(t, t.root()).into_iter().map(TreeCut::new).collect())
}

/// Number of cuts by the recurrence `1 + prod(children)`, 1 for a leaf.
pub fn count_cuts(t: &Taxonomy) -> u128 {
    let mut n = vec![0u128; t.len()];
    for &id in t.preorder().iter().rev() {
        n[id.index()] = if t.is_leaf(id) {
            1
        } else {
            1 + t
                .children(id)
                .iter()
                .map(|c| n[c.index()])
                .fold(1u128, |acc, x| acc.saturating_mul(x))
        };
    }
    n[t.root().index()]
}

fn leaf_sum(t: &Taxonomy, node: NodeId, counts: &ValueCounts) -> u64 {
    t.leaves_under(node)
        .expect("node from this taxonomy")
        .iter()
        .map(|&l| counts.get(t.label(l)).copied().unwrap_or(0))
        .sum()
}

// Strictly better, or tied within rounding and finer.
fn improves<T: Scalar>(cost: T, len: usize, best: Option<&(TreeCut, T)>) -> bool {
    match best {
        None => true,
        Some((cut, b)) => {
            let tol = T::lit(1e-12) * T::one().max(b.abs());
            cost < *b - tol || ((cost - *b).abs() <= tol && len > cut.len())
        }
    }
}

/// Marginal description length of every cut, returning the minimum.
pub fn brute_force_mdl<T: Scalar>(
    t: &Taxonomy,
    counts: &ValueCounts,
    n: u64,
    cap: usize,
) -> Result<(TreeCut, T), EstimationError> {
    if n == 0 {
        return Err(EstimationError::EmptySample);
    }
    let log_n = T::from_count(n).log2();
    let mut best: Option<(TreeCut, T)> = None;
    for cut in enumerate_cuts(t, cap)? {
        let mut bits = T::from_usize(cut.len()).unwrap() * log_n / T::lit(2.0);
        for &m in cut.members() {
            let k = leaf_sum(t, m, counts);
            if k > 0 {
                let q = T::from_count(k) / T::from_count(n);
                let per_word = q / T::from_usize(t.leaf_count(m)).unwrap();
                bits += T::from_count(k) * -per_word.log2();
            }
        }
        if improves(bits, cut.len(), best.as_ref()) {
            best = Some((cut, bits));
        }
    }
    Ok(best.expect("at least one cut"))
}

/// Marginal probability of a class as the sum of its words' probabilities.
fn class_mass<T: Scalar>(t: &Taxonomy, marginal: &TreeCutModel<T>, node: NodeId) -> T {
    t.leaves_under(node)
        .expect("node from this taxonomy")
        .iter()
        .map(|&l| marginal.probability(t, t.label(l)).expect("leaf word"))
        .sum()
}

/// Association description length of every cut under the maximum
/// likelihood values, returning the minimum.
pub fn brute_force_assoc_mdl<T: Scalar>(
    t: &Taxonomy,
    marginal: &TreeCutModel<T>,
    slice: &HeadSlice,
    cap: usize,
) -> Result<(TreeCut, T), EstimationError> {
    let size: u64 = slice
        .counts
        .iter()
        .filter(|(w, _)| t.leaf(w).is_some())
        .map(|(_, &c)| c)
        .sum();
    if size == 0 {
        return Err(EstimationError::EmptySlice(slice.key.clone()));
    }
    let log_size = T::from_count(size).log2();
    let mut best: Option<(TreeCut, T)> = None;
    for cut in enumerate_cuts(t, cap)? {
        let mut bits = T::from_usize(cut.len()).unwrap() * log_size / T::lit(2.0);
        for &m in cut.members() {
            let k = leaf_sum(t, m, &slice.counts);
            if k == 0 {
                continue;
            }
            let p = class_mass(t, marginal, m);
            if p.is_nan() || p <= T::zero() {
                return Err(EstimationError::ZeroMarginal {
                    label: t.label(m).to_string(),
                    count: k,
                });
            }
            let a = T::from_count(k) / T::from_count(size) / p;
            bits += T::from_count(k) * -a.log2();
        }
        if improves(bits, cut.len(), best.as_ref()) {
            best = Some((cut, bits));
        }
    }
    Ok(best.expect("at least one cut"))
}

/// Log2-likelihood of the slice under `h(n) = A(n) * p(n)` with `A`
/// constant on the classes of `cut`.
fn log_likelihood<T: Scalar>(
    t: &Taxonomy,
    marginal: &TreeCutModel<T>,
    cut: &TreeCut,
    a: &[T],
    slice: &HeadSlice,
) -> T {
    let mut ll = T::zero();
    for (word, &c) in &slice.counts {
        let Some(leaf) = t.leaf(word) else { continue };
        let i = cut
            .members()
            .iter()
            .position(|&m| t.dominates_or_equal(m, leaf))
            .expect("cut covers every leaf");
        let h = a[i] * marginal.probability(t, word).expect("leaf word");
        ll += T::from_count(c) * h.log2();
    }
    ll
}

/// Searches association values on the constraint surface `sum A p = 1` over
/// a grid of step `resolution` in `h = A * p`, and returns the best grid
/// log2-likelihood minus the likelihood of [`mle_pair`]'s estimate. The
/// estimate is optimal iff the result is at most zero, up to rounding.
pub fn grid_verify_mle<T: Scalar>(
    t: &Taxonomy,
    marginal: &TreeCutModel<T>,
    cut: &TreeCut,
    slice: &HeadSlice,
    resolution: f64,
) -> Result<T, EstimationError> {
    let cut = t.cut(cut.members().iter().copied())?;
    let (mle, _) = mle_pair(marginal, t, &cut, slice, &SearchOptions::default())?;
    let mle_ll = log_likelihood(t, marginal, &cut, mle.values(), slice);

    let k = cut.len();
    let steps = (1.0 / resolution).round() as usize;
    let mass: Vec<T> = cut
        .members()
        .iter()
        .map(|&m| class_mass(t, marginal, m))
        .collect();
    let counts: Vec<u64> = cut
        .members()
        .iter()
        .map(|&m| leaf_sum(t, m, &slice.counts))
        .collect();
    // sum_n c_n log2 p(n) does not depend on A
    let base: T = slice
        .counts
        .iter()
        .filter(|(w, _)| t.leaf(w).is_some())
        .map(|(w, &c)| T::from_count(c) * marginal.probability(t, w).unwrap().log2())
        .sum();

    let mut best = T::neg_infinity();
    let mut grid = vec![0usize; k];
    // enumerate compositions of `steps` into k parts
    fn visit<T: Scalar>(
        i: usize,
        left: usize,
        grid: &mut [usize],
        eval: &mut impl FnMut(&[usize]) -> T,
        best: &mut T,
    ) {
        if i + 1 == grid.len() {
            grid[i] = left;
            let v = eval(grid);
            if v > *best {
                *best = v;
            }
            return;
        }
        for j in 0..=left {
            grid[i] = j;
            visit(i + 1, left - j, grid, eval, best);
        }
    }
    let mut eval = |g: &[usize]| -> T {
        let mut ll = base;
        for i in 0..k {
            let h = T::from_usize(g[i]).unwrap() / T::from_usize(steps).unwrap();
            if counts[i] == 0 {
                continue;
            }
            if h == T::zero() || mass[i] == T::zero() {
                return T::neg_infinity();
            }
            ll += T::from_count(counts[i]) * (h / mass[i]).log2();
        }
        ll
    };
    visit(0, steps, &mut grid, &mut eval, &mut best);
    Ok(best - mle_ll)
}

/// A ground-truth pair model used to generate data.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedModel<T> {
    pub model: TreeCutPairModel<T>,
    pub seed: u64,
    /// Slice sizes to draw, in order.
    pub schedule: Vec<u64>,
    /// Size of the independent background sample drawn from the marginal.
    pub background_size: u64,
}

/// Data drawn from a planted model.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSample {
    pub slice: HeadSlice,
    pub background: ValueCounts,
}

fn multinomial(rng: &mut ChaCha8Rng, n: u64, probs: &[f64]) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    let mut left = n;
    let mut mass = 1.0f64;
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i + 1 == probs.len() {
            out[i] = left;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = Binomial::new(left, q).expect("valid binomial").sample(rng);
        out[i] = k;
        left -= k;
        mass -= p;
    }
    out
}

/// Draws `n` slice words from `h = A * p` and `pm.background_size` background
/// words from `p`, independently. Deterministic given `seed`.
pub fn sample_from_pair<T: Scalar>(
    pm: &PlantedModel<T>,
    t: &Taxonomy,
    n: u64,
    seed: u64,
) -> Result<PlantedSample, EstimationError> {
    let model = &pm.model;
    let residual = model.stochastic_residual(t);
    if residual.is_nan() || residual.abs() > T::stochastic_tolerance() {
        return Err(EstimationError::NotStochastic {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let leaves = t.leaves();
    let h: Vec<f64> = leaves
        .iter()
        .map(|&l| model.leaf_conditional(t, l).to_f64().unwrap())
        .collect();
    if let Some(bad) = h.iter().find(|x| !(0.0..=1.0 + 1e-9).contains(*x)) {
        return Err(EstimationError::BadValue {
            what: "planted conditional probability",
            value: *bad,
        });
    }
    let p: Vec<f64> = leaves
        .iter()
        .map(|&l| model.marginal().leaf_probability(t, l).to_f64().unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let to_counts = |draws: Vec<u64>| -> ValueCounts {
        leaves
            .iter()
            .zip(draws)
            .filter(|(_, c)| *c > 0)
            .map(|(&l, c)| (t.label(l).to_string(), c))
            .collect()
    };
    let slice = to_counts(multinomial(&mut rng, n, &h));
    let background = to_counts(multinomial(&mut rng, pm.background_size, &p));
    Ok(PlantedSample {
        slice: HeadSlice::new(model.assoc().key().clone(), slice),
        background,
    })
}

/// Random taxonomy following the protocol in the module docs.
pub fn random_taxonomy(rng: &mut impl Rng, max_leaves: usize) -> Taxonomy {
    const MAX_DEPTH: usize = 4;
    loop {
        let mut specs = vec![NodeSpec::new("C0", None)];
        let mut frontier = vec![(0usize, 0usize)];
        let mut leaves = 0;
        let mut internal = 1;
        while let Some((id, depth)) = frontier.pop() {
            let k = rng.random_range(2..=4);
            for _ in 0..k {
                let child = specs.len();
                let grow = depth + 1 < MAX_DEPTH && rng.random_bool(0.35);
                if grow {
                    specs.push(NodeSpec::new(format!("C{internal}"), Some(id)));
                    internal += 1;
                    frontier.push((child, depth + 1));
                } else {
                    specs.push(NodeSpec::new(format!("w{leaves}"), Some(id)));
                    leaves += 1;
                }
            }
        }
        if leaves <= max_leaves {
            return Taxonomy::from_nodes(specs).expect("generated tree is valid");
        }
    }
}

/// Random leaf counts in `0..=max`, roughly a third of them zero, never all
/// zero.
pub fn random_counts(rng: &mut impl Rng, t: &Taxonomy, max: u64) -> ValueCounts {
    loop {
        let counts: ValueCounts = t
            .leaves()
            .iter()
            .filter_map(|&l| {
                let c = if rng.random_bool(0.33) {
                    0
                } else {
                    rng.random_range(1..=max)
                };
                (c > 0).then(|| (t.label(l).to_string(), c))
            })
            .collect();
        if !counts.is_empty() {
            return counts;
        }
    }
}

/// Random sub-multiset of `counts`, never empty.
pub fn random_subcounts(rng: &mut impl Rng, counts: &ValueCounts) -> ValueCounts {
    loop {
        let sub: ValueCounts = counts
            .iter()
            .filter_map(|(w, &c)| {
                let k = rng.random_range(0..=c);
                (k > 0).then(|| (w.clone(), k))
            })
            .collect();
        if !sub.is_empty() {
            return sub;
        }
    }
}

/// Planted association values, one per class.
pub const PLANTED_LEVELS: [f64; 3] = [0.25, 1.0, 4.0];

/// Random planted pair model on `t`: a cut of at most `max_cut` classes,
/// values from [`PLANTED_LEVELS`], and a leaf-level marginal chosen so that
/// the stochastic condition holds exactly.
pub fn plant_random<T: Scalar>(
    rng: &mut impl Rng,
    t: &Taxonomy,
    key: HeadKey,
    max_cut: usize,
) -> Result<TreeCutPairModel<T>, EstimationError> {
    let cuts: Vec<TreeCut> = enumerate_cuts(t, usize::MAX)?
        .into_iter()
        .filter(|c| c.len() <= max_cut && (c.len() >= 2 || t.num_leaves() == 1))
        .collect();
    let cut = t.cut(
        cuts[rng.random_range(0..cuts.len())]
            .members()
            .iter()
            .copied(),
    )?;
    let k = cut.len();
    let a: Vec<f64> = loop {
        let a: Vec<f64> = (0..k)
            .map(|_| PLANTED_LEVELS[rng.random_range(0..3)])
            .collect();
        let has = |x: f64| a.contains(&x);
        if a.iter().all(|&x| x == 1.0) || (has(4.0) && has(0.25)) {
            break a;
        }
    };
    // masses: sum p = 1 and sum A p = 1
    let ones = a.iter().filter(|&&x| x == 1.0).count();
    let m1 = if ones == k {
        1.0
    } else if ones > 0 {
        rng.random_range(0.2..0.6)
    } else {
        0.0
    };
    let rest = 1.0 - m1;
    let group_total = |x: f64| match x {
        1.0 => m1,
        4.0 => rest / 5.0,
        _ => rest * 4.0 / 5.0,
    };
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..1.5)).collect();
    let class_mass: Vec<f64> = (0..k)
        .map(|i| {
            let group: f64 = (0..k).filter(|&j| a[j] == a[i]).map(|j| weights[j]).sum();
            group_total(a[i]) * weights[i] / group
        })
        .collect();
    let mut leaf_q = vec![0.0f64; t.num_leaves()];
    for (i, &m) in cut.members().iter().enumerate() {
        let under = t.leaves_under(m)?;
        let w: Vec<f64> = under.iter().map(|_| rng.random_range(0.5..1.5)).collect();
        let total: f64 = w.iter().sum();
        for (&leaf, wi) in under.iter().zip(w) {
            let pos = t.leaves().iter().position(|&l| l == leaf).unwrap();
            leaf_q[pos] = class_mass[i] * wi / total;
        }
    }
    let marginal = TreeCutModel::new(t, t.leaf_cut(), leaf_q.into_iter().map(T::lit).collect(), 0)?;
    let assoc = AssociationTreeCutModel::new(t, key, cut, a.into_iter().map(T::lit).collect(), 0)?;
    TreeCutPairModel::new(t, assoc, marginal)
}

/// Random association values from [`PLANTED_LEVELS`] on a random cut of at
/// most `max_cut` classes, rescaled to satisfy the stochastic condition
/// against a given marginal.
pub fn plant_on_marginal<T: Scalar>(
    rng: &mut impl Rng,
    t: &Taxonomy,
    marginal: &TreeCutModel<T>,
    key: HeadKey,
    max_cut: usize,
) -> Result<TreeCutPairModel<T>, EstimationError> {
    let cuts: Vec<TreeCut> = enumerate_cuts(t, usize::MAX)?
        .into_iter()
        .filter(|c| c.len() <= max_cut && (c.len() >= 2 || t.num_leaves() == 1))
        .collect();
    let cut = t.cut(
        cuts[rng.random_range(0..cuts.len())]
            .members()
            .iter()
            .copied(),
    )?;
    let raw: Vec<T> = (0..cut.len())
        .map(|_| T::lit(PLANTED_LEVELS[rng.random_range(0..3)]))
        .collect();
    let norm: T = cut
        .members()
        .iter()
        .zip(&raw)
        .map(|(&m, &a)| a * class_mass(t, marginal, m))
        .sum();
    let assoc =
        AssociationTreeCutModel::new(t, key, cut, raw.iter().map(|&a| a / norm).collect(), 0)?;
    TreeCutPairModel::new(t, assoc, marginal.clone())
}

/// Settings of [`run_verification`].
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub instances: usize,
    pub max_leaves: usize,
    pub cap: usize,
    pub grid_instances: usize,
    pub grid_resolution: f64,
    pub tolerance: f64,
    /// Charge one extra parameter per class in the fast searches. The suite
    /// must then fail.
    pub mutate_penalty: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            instances: 200,
            max_leaves: 12,
            cap: DEFAULT_CAP,
            grid_instances: 50,
            grid_resolution: 1e-3,
            tolerance: 1e-9,
            mutate_penalty: false,
        }
    }
}

/// Outcome of one family of checks.
#[derive(Debug, Clone, Default)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// One entry per failing instance, with enough detail to reproduce it.
    pub failures: Vec<String>,
    pub notices: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            ..Default::default()
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, ok: bool, dump: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(dump());
        }
    }
}

fn dump_instance(t: &Taxonomy, counts: &ValueCounts, slice: Option<&ValueCounts>) -> String {
    let mut s = format!("tree {} counts {:?}", t.to_sexpr(), counts);
    if let Some(sl) = slice {
        s.push_str(&format!(" slice {sl:?}"));
    }
    s
}

/// Runs the full equivalence suite between the fast estimators and the
/// exhaustive oracles.
pub fn run_verification(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let opts = SearchOptions::<f64> {
        epsilon_floor: None,
        extra_params: u32::from(cfg.mutate_penalty),
    };
    let mut cut_count = CheckOutcome::new("cut enumeration matches recurrence");
    let mut marginal = CheckOutcome::new("find_mdl equals exhaustive minimum");
    let mut assoc = CheckOutcome::new("find_assoc_mdl equals exhaustive minimum");
    let mut stochastic = CheckOutcome::new("fitted pair models are normalized");
    let mut optimality = CheckOutcome::new("closed-form estimate beats the grid");

    for i in 0..cfg.instances {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        let t = random_taxonomy(&mut rng, cfg.max_leaves);
        let counts = random_counts(&mut rng, &t, 50);
        let slice_counts = random_subcounts(&mut rng, &counts);
        if t.num_leaves() > cfg.cap {
            for c in [&mut cut_count, &mut marginal, &mut assoc, &mut stochastic] {
                c.skipped += 1;
            }
            marginal.notices.push(format!(
                "instance {i}: {} leaves above cap {}, skipped",
                t.num_leaves(),
                cfg.cap
            ));
            continue;
        }
        let cuts = enumerate_cuts(&t, cfg.cap).expect("within cap");
        cut_count.record(cuts.len() as u128 == count_cuts(&t), || {
            format!(
                "instance {i}: {} cuts enumerated, recurrence {}; tree {}",
                cuts.len(),
                count_cuts(&t),
                t.to_sexpr()
            )
        });

        let n: u64 = counts.values().sum();
        let cc = ClassCounts::new(&t, &counts);
        let (fast_model, fast_bits) = find_mdl_with(&t, &cc, &opts).expect("nonempty");
        let (_, brute_bits) = brute_force_mdl::<f64>(&t, &counts, n, cfg.cap).expect("within cap");
        marginal.record((fast_bits - brute_bits).abs() <= cfg.tolerance, || {
            format!(
                "instance {i}: fast {fast_bits} vs exhaustive {brute_bits}; {}",
                dump_instance(&t, &counts, None)
            )
        });

        let slice = HeadSlice::new(HeadKey::new("h", "s"), slice_counts.clone());
        let table = MarginalTable::new(&fast_model, &t);
        let (fit, fit_bits) =
            find_assoc_mdl_with(&slice, &t, &table, &opts).expect("consistent inputs");
        let (_, brute_bits) =
            brute_force_assoc_mdl(&t, &fast_model, &slice, cfg.cap).expect("within cap");
        assoc.record((fit_bits - brute_bits).abs() <= cfg.tolerance, || {
            format!(
                "instance {i}: fast {fit_bits} vs exhaustive {brute_bits}; {}",
                dump_instance(&t, &counts, Some(&slice_counts))
            )
        });
        let pair = TreeCutPairModel::new_unchecked(fit, fast_model.clone());
        let residual = pair.stochastic_residual(&t);
        stochastic.record(residual.abs() <= cfg.tolerance, || {
            format!(
                "instance {i}: residual {residual:e}; {}",
                dump_instance(&t, &counts, Some(&slice_counts))
            )
        });
    }

    for i in 0..cfg.grid_instances as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1_000_000 + i));
        let t = random_taxonomy(&mut rng, cfg.max_leaves.min(8));
        let counts = random_counts(&mut rng, &t, 30);
        let slice = HeadSlice::new(HeadKey::new("h", "s"), random_subcounts(&mut rng, &counts));
        let cc = ClassCounts::new(&t, &counts);
        let (m, _) = find_mdl_with::<f64>(&t, &cc, &SearchOptions::default()).expect("nonempty");
        let cuts: Vec<TreeCut> = match enumerate_cuts(&t, cfg.cap) {
            Ok(c) => c.into_iter().filter(|c| c.len() <= 3).collect(),
            Err(_) => {
                optimality.skipped += 1;
                continue;
            }
        };
        let cut = &cuts[rng.random_range(0..cuts.len())];
        let gap =
            grid_verify_mle(&t, &m, cut, &slice, cfg.grid_resolution).expect("consistent inputs");
        optimality.record(gap <= cfg.tolerance, || {
            format!(
                "grid instance {i}: gap {gap:e}; {}",
                dump_instance(&t, &counts, Some(&slice.counts))
            )
        });
    }

    vec![cut_count, marginal, assoc, stochastic, optimality]
}
