//! Prepositional phrase attachment from fitted models, the baselines it is
//! compared against, and coverage/accuracy bookkeeping.
//!
//! Every method produces two scores for a quadruple `(verb, noun1, prep,
//! noun2)`, one per candidate head, and attaches to the larger one. Equal or
//! missing scores leave the quadruple undecided. A confidence value,
//! `|x1 - x2| / sqrt(s1^2 / N1 + s2^2 / N2)`, lets a threshold trade coverage
//! for accuracy.

use crate::atcm::TreeCutPairModel;
use crate::corpus::{Attachment, HeadKey, PairSample, TestQuadruple, ValueCounts};
use crate::error::EstimationError;
use crate::scalar::Scalar;
use crate::taxonomy::{NodeId, Taxonomy};
use crate::tcm::TreeCutModel;
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    Verb,
    Noun,
    Undecided,
}

impl Choice {
    pub fn is_decided(self) -> bool {
        self != Choice::Undecided
    }

    pub fn matches(self, gold: Attachment) -> bool {
        matches!(
            (self, gold),
            (Choice::Verb, Attachment::Verb) | (Choice::Noun, Attachment::Noun)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttachmentDecision<T> {
    pub choice: Choice,
    pub verb_score: Option<T>,
    pub noun_score: Option<T>,
    pub confidence: Option<T>,
}

impl<T: Scalar> AttachmentDecision<T> {
    pub fn undecided() -> Self {
        AttachmentDecision {
            choice: Choice::Undecided,
            verb_score: None,
            noun_score: None,
            confidence: None,
        }
    }

    fn from_scores(
        verb: Option<T>,
        noun: Option<T>,
        confidence: Option<T>,
        threshold: Option<T>,
    ) -> Self {
        let mut d = AttachmentDecision {
            choice: compare(verb, noun),
            verb_score: verb,
            noun_score: noun,
            confidence,
        };
        d.choice = d.at_threshold(threshold);
        d
    }

    /// The choice this decision makes when a confidence of at least
    /// `threshold` is required. An infinite threshold decides nothing.
    pub fn at_threshold(&self, threshold: Option<T>) -> Choice {
        let base = compare(self.verb_score, self.noun_score);
        match threshold {
            None => base,
            Some(th) if th.is_infinite() && th > T::zero() => Choice::Undecided,
            Some(th) => match self.confidence {
                Some(c) if c >= th => base,
                _ => Choice::Undecided,
            },
        }
    }
}

fn compare<T: Scalar>(verb: Option<T>, noun: Option<T>) -> Choice {
    match (verb, noun) {
        (Some(v), Some(n)) if v > n => Choice::Verb,
        (Some(v), Some(n)) if n > v => Choice::Noun,
        _ => Choice::Undecided,
    }
}

fn population_variance<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    let vals: Vec<T> = values.collect();
    if vals.is_empty() {
        return T::zero();
    }
    let n = T::from_usize(vals.len()).unwrap();
    let mean = vals.iter().copied().sum::<T>() / n;
    vals.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n
}

/// `|x1 - x2| / sqrt(var1 / n1 + var2 / n2)`, with `0 / 0 = 0` and
/// `x / 0 = inf`.
pub fn confidence<T: Scalar>(x1: T, var1: T, n1: u64, x2: T, var2: T, n2: u64) -> T {
    if x1 == x2 {
        return T::zero();
    }
    let num = (x1 - x2).abs();
    let term = |var: T, n: u64| {
        if n == 0 {
            T::zero()
        } else {
            var / T::from_count(n)
        }
    };
    let den = (term(var1, n1) + term(var2, n2)).sqrt();
    if den > T::zero() {
        num / den
    } else {
        T::infinity()
    }
}

/// Confidence that the two association values at `noun2` differ, using the
/// unweighted variance of each model's values over its cut classes.
pub fn confidence_score<T: Scalar>(
    verb_model: &TreeCutPairModel<T>,
    noun_model: &TreeCutPairModel<T>,
    t: &Taxonomy,
    noun2: &str,
) -> Result<T, EstimationError> {
    let (a1, a2) = (
        verb_model.assoc().value_for_word(t, noun2)?,
        noun_model.assoc().value_for_word(t, noun2)?,
    );
    let var = |m: &TreeCutPairModel<T>| population_variance(m.assoc().values().iter().copied());
    Ok(confidence(
        a1,
        var(verb_model),
        verb_model.assoc().slice_size(),
        a2,
        var(noun_model),
        noun_model.assoc().slice_size(),
    ))
}

fn check_slot<T: Scalar>(
    q: &TestQuadruple,
    m: Option<&TreeCutPairModel<T>>,
) -> Result<(), EstimationError> {
    match m {
        Some(m) if m.assoc().key().slot != q.prep => Err(EstimationError::SlotMismatch {
            model: m.assoc().key().slot.clone(),
            prep: q.prep.clone(),
        }),
        _ => Ok(()),
    }
}

/// Attaches to the head whose association value at `noun2` is larger.
///
/// A missing model (head never observed) or a `noun2` outside the taxonomy
/// leaves the quadruple undecided.
pub fn decide_attachment<T: Scalar>(
    q: &TestQuadruple,
    verb_model: Option<&TreeCutPairModel<T>>,
    noun_model: Option<&TreeCutPairModel<T>>,
    t: &Taxonomy,
    threshold: Option<T>,
) -> Result<AttachmentDecision<T>, EstimationError> {
    check_slot(q, verb_model)?;
    check_slot(q, noun_model)?;
    let Some(leaf) = t.leaf(&q.noun2) else {
        return Ok(AttachmentDecision::undecided());
    };
    let score = |m: Option<&TreeCutPairModel<T>>| m.and_then(|m| m.assoc().value_at(t, leaf));
    let (v, n) = (score(verb_model), score(noun_model));
    let conf = match (verb_model, noun_model) {
        (Some(vm), Some(nm)) => Some(confidence_score(vm, nm, t, &q.noun2)?),
        _ => None,
    };
    Ok(AttachmentDecision::from_scores(v, n, conf, threshold))
}

/// Baseline comparing conditional probabilities from per-head tree cut
/// models. Confidence is computed on `log2` probabilities, with the variance
/// taken over the per-word log probabilities of the nonzero cut classes.
pub fn mdl_conditional_decide<T: Scalar>(
    q: &TestQuadruple,
    verb_tcm: Option<&TreeCutModel<T>>,
    noun_tcm: Option<&TreeCutModel<T>>,
    t: &Taxonomy,
    threshold: Option<T>,
) -> AttachmentDecision<T> {
    let Some(leaf) = t.leaf(&q.noun2) else {
        return AttachmentDecision::undecided();
    };
    let score = |m: Option<&TreeCutModel<T>>| m.map(|m| m.leaf_probability(t, leaf));
    let (v, n) = (score(verb_tcm), score(noun_tcm));
    let conf = match (verb_tcm, noun_tcm, v, n) {
        (Some(vm), Some(nm), Some(pv), Some(pn)) => {
            let log_var = |m: &TreeCutModel<T>| {
                population_variance(
                    m.cut()
                        .members()
                        .iter()
                        .zip(m.q())
                        .filter(|(_, &q)| q > T::zero())
                        .map(|(&c, &q)| (q / T::from_usize(t.leaf_count(c)).unwrap()).log2()),
                )
            };
            Some(confidence(
                pv.log2(),
                log_var(vm),
                vm.sample_size(),
                pn.log2(),
                log_var(nm),
                nm.sample_size(),
            ))
        }
        _ => None,
    };
    AttachmentDecision::from_scores(v, n, conf, threshold)
}

/// Class-level association `sum_{n in C} p(n) log2(p(n, v) / (p(n) p(v)))`
/// with empirical relative frequencies from `s`. Words never seen with the
/// head contribute nothing.
pub fn selectional_association<T: Scalar>(
    s: &PairSample,
    t: &Taxonomy,
    class: NodeId,
    key: &HeadKey,
) -> Result<T, EstimationError> {
    t.check(class)?;
    if s.is_empty() {
        return Err(EstimationError::EmptySample);
    }
    let marginal = s.project_values();
    let slice = s.slice_by_head(key);
    let mut total = T::zero();
    for (word, &joint) in &slice.counts {
        match t.leaf(word) {
            Some(leaf) if t.dominates_or_equal(class, leaf) => {
                total += sa_term(joint, marginal[word], slice.size(), s.total());
            }
            _ => {}
        }
    }
    Ok(total)
}

#[inline]
fn sa_term<T: Scalar>(joint: u64, word: u64, head: u64, total: u64) -> T {
    let c = T::from_count;
    let p_n = c(word) / c(total);
    // p(n,v) / (p(n) p(v)) = joint * |S| / (count(n) * |S_v|)
    p_n * (c(joint) * c(total) / (c(word) * c(head))).log2()
}

/// Selectional association of every class for every head of a sample.
#[derive(Debug, Clone)]
pub struct SaModel<T> {
    profiles: HashMap<HeadKey, SaProfile<T>>,
}

#[derive(Debug, Clone)]
struct SaProfile<T> {
    by_node: HashMap<NodeId, T>,
    size: u64,
}

impl<T: Scalar> SaModel<T> {
    pub fn new(t: &Taxonomy, s: &PairSample) -> Self {
        Self::for_heads(t, s, s.heads().cloned().collect::<Vec<_>>().iter())
    }

    pub fn for_heads<'a>(
        t: &Taxonomy,
        s: &PairSample,
        keys: impl Iterator<Item = &'a HeadKey>,
    ) -> Self {
        let marginal: ValueCounts = s.project_values();
        let mut profiles = HashMap::new();
        for key in keys {
            let slice = s.slice_by_head(key);
            if slice.is_empty() {
                continue;
            }
            let mut by_node: HashMap<NodeId, T> = HashMap::new();
            for (word, &joint) in &slice.counts {
                let Some(leaf) = t.leaf(word) else { continue };
                let term: T = sa_term(joint, marginal[word], slice.size(), s.total());
                for anc in t.ancestors(leaf) {
                    *by_node.entry(anc).or_insert_with(T::zero) += term;
                }
            }
            profiles.insert(
                key.clone(),
                SaProfile {
                    by_node,
                    size: slice.size(),
                },
            );
        }
        SaModel { profiles }
    }

    /// Selectional association of `node` with `key`; 0 for unseen heads.
    pub fn value(&self, key: &HeadKey, node: NodeId) -> T {
        self.profiles
            .get(key)
            .and_then(|p| p.by_node.get(&node).copied())
            .unwrap_or_else(T::zero)
    }

    /// Values along the chain from `leaf` to the root.
    fn chain(&self, t: &Taxonomy, key: &HeadKey, leaf: NodeId) -> Vec<T> {
        t.ancestors(leaf).map(|n| self.value(key, n)).collect()
    }

    /// Largest selectional association over `leaf` and its ancestors.
    pub fn best_over_ancestors(&self, t: &Taxonomy, key: &HeadKey, leaf: NodeId) -> T {
        self.chain(t, key, leaf)
            .into_iter()
            .fold(T::neg_infinity(), T::max)
    }

    /// Compares the best ancestor scores of the two heads. Confidence uses
    /// the variance of each head's values along the ancestor chain of `noun2`.
    pub fn decide(
        &self,
        q: &TestQuadruple,
        t: &Taxonomy,
        threshold: Option<T>,
    ) -> AttachmentDecision<T> {
        let Some(leaf) = t.leaf(&q.noun2) else {
            return AttachmentDecision::undecided();
        };
        let (vk, nk) = (q.verb_key(), q.noun_key());
        let (vc, nc) = (self.chain(t, &vk, leaf), self.chain(t, &nk, leaf));
        let best = |c: &[T]| c.iter().copied().fold(T::neg_infinity(), T::max);
        let (v, n) = (best(&vc), best(&nc));
        let size = |k: &HeadKey| self.profiles.get(k).map_or(0, |p| p.size);
        let conf = confidence(
            v,
            population_variance(vc.into_iter()),
            size(&vk),
            n,
            population_variance(nc.into_iter()),
            size(&nk),
        );
        AttachmentDecision::from_scores(Some(v), Some(n), Some(conf), threshold)
    }
}

/// Selectional association baseline for a single quadruple.
pub fn sa_decide<T: Scalar>(
    q: &TestQuadruple,
    s: &PairSample,
    t: &Taxonomy,
) -> AttachmentDecision<T> {
    let keys = [q.verb_key(), q.noun_key()];
    SaModel::for_heads(t, s, keys.iter()).decide(q, t, None)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub threshold: T,
    /// Fraction of quadruples decided.
    pub coverage: f64,
    /// Fraction of decisions that are correct; none when nothing is decided.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    pub points: Vec<CurvePoint<T>>,
    /// Coverage where accuracy equals coverage, interpolated linearly
    /// between adjacent points.
    pub break_even: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub n_test: usize,
    pub decided: usize,
    pub correct: usize,
    /// Percentage of quadruples decided.
    pub coverage: f64,
    /// Percentage of decisions that are correct.
    pub accuracy: Option<f64>,
}

fn tally(choices: impl Iterator<Item = (Choice, Attachment)>) -> (usize, usize, usize) {
    let (mut n, mut decided, mut correct) = (0, 0, 0);
    for (choice, gold) in choices {
        n += 1;
        if choice.is_decided() {
            decided += 1;
            if choice.matches(gold) {
                correct += 1;
            }
        }
    }
    (n, decided, correct)
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn evaluate_choices(choices: impl Iterator<Item = (Choice, Attachment)>) -> EvaluationReport {
    let (n, decided, correct) = tally(choices);
    EvaluationReport {
        n_test: n,
        decided,
        correct,
        coverage: ratio(decided, n).unwrap_or(0.0) * 100.0,
        accuracy: ratio(correct, decided).map(|a| a * 100.0),
    }
}

pub fn evaluate<T: Scalar>(decisions: &[(AttachmentDecision<T>, Attachment)]) -> EvaluationReport {
    evaluate_choices(decisions.iter().map(|(d, g)| (d.choice, *g)))
}

/// Always attach to the noun.
pub fn default_baseline(quads: &[TestQuadruple]) -> EvaluationReport {
    evaluate_choices(quads.iter().map(|q| (Choice::Noun, q.gold)))
}

/// Coverage and accuracy at each threshold, which must be descending.
pub fn coverage_accuracy_curve<T: Scalar>(
    scored: &[(AttachmentDecision<T>, Attachment)],
    thresholds: &[T],
) -> Result<Curve<T>, EstimationError> {
    if thresholds
        .windows(2)
        .any(|w| w[0].is_nan() || w[1].is_nan() || w[0] < w[1])
    {
        return Err(EstimationError::ThresholdOrder);
    }
    let points: Vec<CurvePoint<T>> = thresholds
        .iter()
        .map(|&th| {
            let (n, decided, correct) =
                tally(scored.iter().map(|(d, g)| (d.at_threshold(Some(th)), *g)));
            CurvePoint {
                threshold: th,
                coverage: ratio(decided, n).unwrap_or(0.0),
                accuracy: ratio(correct, decided),
            }
        })
        .collect();
    let break_even = break_even(&points);
    Ok(Curve { points, break_even })
}

fn break_even<T>(points: &[CurvePoint<T>]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.accuracy.map(|a| (p.coverage, a)))
        .collect();
    if let Some(&(c, _)) = pts.iter().find(|(c, a)| a == c) {
        return Some(c);
    }
    pts.windows(2).find_map(|w| {
        let (c0, a0) = w[0];
        let (c1, a1) = w[1];
        let (d0, d1) = (a0 - c0, a1 - c1);
        (d0.signum() != d1.signum()).then(|| {
            let f = d0 / (d0 - d1);
            c0 + f * (c1 - c0)
        })
    })
}

fn pct(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.1}"))
}

/// `method<TAB>coverage<TAB>accuracy` table, percentages to one decimal.
pub fn report_table<'a>(rows: impl IntoIterator<Item = (&'a str, &'a EvaluationReport)>) -> String {
    let mut out = String::from("method\tcoverage\taccuracy\n");
    for (name, r) in rows {
        writeln!(
            out,
            "{name}\t{}\t{}",
            pct(Some(r.coverage)),
            pct(r.accuracy)
        )
        .unwrap();
    }
    out
}

/// `threshold<TAB>coverage<TAB>accuracy` rows, ratios in `[0, 1]`.
pub fn curve_tsv<T: Scalar>(curve: &Curve<T>) -> String {
    let mut out = String::from("threshold\tcoverage\taccuracy\n");
    for p in &curve.points {
        let acc = p
            .accuracy
            .map_or_else(|| "NA".to_string(), |a| format!("{a:.6}"));
        writeln!(out, "{}\t{:.6}\t{acc}", p.threshold, p.coverage).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atcm::AssociationTreeCutModel;
    use crate::taxonomy::TreeCut;

    fn quad(gold: Attachment) -> TestQuadruple {
        TestQuadruple {
            verb: "eat".into(),
            noun1: "pizza".into(),
            prep: "with".into(),
            noun2: "fork".into(),
            gold,
        }
    }

    fn tax() -> Taxonomy {
        Taxonomy::parse("(THING (TOOL fork knife) (FOOD anchovy olive))").unwrap()
    }

    fn pair(t: &Taxonomy, head: &str, values: [f64; 2], n: u64) -> TreeCutPairModel<f64> {
        let tool = t.parent(t.leaf("fork").unwrap()).unwrap();
        let food = t.parent(t.leaf("olive").unwrap()).unwrap();
        let marginal =
            TreeCutModel::new(t, TreeCut::new(vec![tool, food]), vec![0.5, 0.5], 100).unwrap();
        let assoc = AssociationTreeCutModel::new(
            t,
            HeadKey::new(head, "with"),
            TreeCut::new(vec![tool, food]),
            values.to_vec(),
            n,
        )
        .unwrap();
        TreeCutPairModel::new_unchecked(assoc, marginal)
    }

    #[test]
    fn larger_association_wins() {
        let t = tax();
        let v = pair(&t, "eat", [1.5, 0.5], 20);
        let n = pair(&t, "pizza", [0.3, 1.7], 20);
        let d = decide_attachment(&quad(Attachment::Verb), Some(&v), Some(&n), &t, None).unwrap();
        assert_eq!(d.choice, Choice::Verb);
        assert_eq!(d.verb_score, Some(1.5));
        assert_eq!(d.noun_score, Some(0.3));
    }

    #[test]
    fn equal_scores_are_undecided() {
        let t = tax();
        let v = pair(&t, "eat", [1.0, 1.0], 20);
        let n = pair(&t, "pizza", [1.0, 1.0], 20);
        let d = decide_attachment(&quad(Attachment::Verb), Some(&v), Some(&n), &t, None).unwrap();
        assert_eq!(d.choice, Choice::Undecided);
        assert_eq!(d.confidence, Some(0.0));
    }

    #[test]
    fn missing_models_and_unknown_words() {
        let t = tax();
        let v = pair(&t, "eat", [1.5, 0.5], 20);
        let d = decide_attachment(&quad(Attachment::Verb), Some(&v), None, &t, None).unwrap();
        assert_eq!(d.choice, Choice::Undecided);
        let mut q = quad(Attachment::Verb);
        q.noun2 = "spoon".into();
        let d = decide_attachment(&q, Some(&v), Some(&v), &t, None).unwrap();
        assert_eq!(d.choice, Choice::Undecided);
    }

    #[test]
    fn slot_mismatch_is_an_error() {
        let t = tax();
        let v = pair(&t, "eat", [1.5, 0.5], 20);
        let mut q = quad(Attachment::Verb);
        q.prep = "on".into();
        assert!(matches!(
            decide_attachment(&q, Some(&v), None, &t, None),
            Err(EstimationError::SlotMismatch { .. })
        ));
    }

    #[test]
    fn confidence_formula() {
        let t = tax();
        let v = pair(&t, "eat", [1.5, 0.5], 20);
        let n = pair(&t, "pizza", [0.3, 1.7], 10);
        // variances 0.25 and 0.49
        let want = 1.2 / (0.25f64 / 20.0 + 0.49 / 10.0).sqrt();
        let got = confidence_score(&v, &n, &t, "fork").unwrap();
        assert!((got - want).abs() < 1e-12);
        assert_eq!(confidence_score(&v, &v, &t, "fork").unwrap(), 0.0);
        let flat1 = pair(&t, "eat", [1.0, 1.0], 20);
        let flat2 = pair(&t, "pizza", [2.0, 2.0], 20);
        assert_eq!(
            confidence_score(&flat1, &flat2, &t, "fork").unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn thresholds_gate_decisions() {
        let t = tax();
        let v = pair(&t, "eat", [1.5, 0.5], 20);
        let n = pair(&t, "pizza", [0.3, 1.7], 10);
        let conf = confidence_score(&v, &n, &t, "fork").unwrap();
        let q = quad(Attachment::Verb);
        let lo = decide_attachment(&q, Some(&v), Some(&n), &t, Some(conf * 0.5)).unwrap();
        let hi = decide_attachment(&q, Some(&v), Some(&n), &t, Some(conf * 2.0)).unwrap();
        assert_eq!(lo.choice, Choice::Verb);
        assert_eq!(hi.choice, Choice::Undecided);
        assert_eq!(hi.at_threshold(None), Choice::Verb);
        assert_eq!(lo.at_threshold(Some(f64::INFINITY)), Choice::Undecided);
    }

    #[test]
    fn evaluation_arithmetic() {
        let mut ds = Vec::new();
        for i in 0..10 {
            let choice = match i {
                0..=6 => Choice::Verb,
                7 => Choice::Noun,
                _ => Choice::Undecided,
            };
            ds.push((choice, Attachment::Verb));
        }
        let r = evaluate_choices(ds.into_iter());
        assert_eq!(r.coverage, 80.0);
        assert_eq!(r.accuracy, Some(87.5));
        let none = evaluate_choices((0..4).map(|_| (Choice::Undecided, Attachment::Noun)));
        assert_eq!(none.coverage, 0.0);
        assert_eq!(none.accuracy, None);
    }

    #[test]
    fn default_baseline_accuracy() {
        let nouns: Vec<_> = (0..5).map(|_| quad(Attachment::Noun)).collect();
        let verbs: Vec<_> = (0..5).map(|_| quad(Attachment::Verb)).collect();
        assert_eq!(default_baseline(&nouns).accuracy, Some(100.0));
        assert_eq!(default_baseline(&verbs).accuracy, Some(0.0));
        assert_eq!(default_baseline(&verbs).coverage, 100.0);
    }

    #[test]
    fn mdl_baseline() {
        let t = tax();
        let m = TreeCutModel::new(&t, t.leaf_cut(), vec![0.4, 0.1, 0.2, 0.3], 50).unwrap();
        let d = mdl_conditional_decide(&quad(Attachment::Verb), Some(&m), Some(&m), &t, None);
        assert_eq!(d.choice, Choice::Undecided);
        let z = TreeCutModel::new(&t, t.leaf_cut(), vec![0.0, 0.5, 0.2, 0.3], 50).unwrap();
        let d = mdl_conditional_decide(&quad(Attachment::Verb), Some(&m), Some(&z), &t, None);
        assert_eq!(d.choice, Choice::Verb);
        assert_eq!(d.confidence, Some(f64::INFINITY));
    }

    fn sa_sample() -> PairSample {
        let mut s = PairSample::new();
        s.add(HeadKey::new("eat", "with"), "fork", 8);
        s.add(HeadKey::new("eat", "with"), "anchovy", 2);
        s.add(HeadKey::new("pizza", "with"), "anchovy", 6);
        s.add(HeadKey::new("pizza", "with"), "olive", 4);
        s.add(HeadKey::new("cut", "with"), "knife", 10);
        s
    }

    #[test]
    fn selectional_association_matches_direct_sum() {
        let t = tax();
        let s = sa_sample();
        let key = HeadKey::new("eat", "with");
        // |S| = 30, |S_eat| = 10, count(fork) = 8, count(anchovy) = 8
        let fork_term = (8.0 / 30.0) * ((8.0 * 30.0) / (8.0 * 10.0f64)).log2();
        let anchovy_term = (8.0 / 30.0) * ((2.0 * 30.0) / (8.0 * 10.0f64)).log2();
        let tool = t.parent(t.leaf("fork").unwrap()).unwrap();
        let got: f64 = selectional_association(&s, &t, tool, &key).unwrap();
        assert!((got - fork_term).abs() < 1e-12);
        let root: f64 = selectional_association(&s, &t, t.root(), &key).unwrap();
        assert!((root - (fork_term + anchovy_term)).abs() < 1e-12);
        let olive = t.leaf("olive").unwrap();
        assert_eq!(
            selectional_association::<f64>(&s, &t, olive, &key).unwrap(),
            0.0
        );
        assert!(selectional_association::<f64>(&PairSample::new(), &t, olive, &key).is_err());

        let sa = SaModel::<f64>::new(&t, &s);
        for &n in t.preorder() {
            let direct: f64 = selectional_association(&s, &t, n, &key).unwrap();
            assert!((sa.value(&key, n) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn sa_decisions() {
        let t = tax();
        let s = sa_sample();
        let q = quad(Attachment::Verb);
        let d: AttachmentDecision<f64> = sa_decide(&q, &s, &t);
        // hand enumeration over fork, TOOL, THING
        let brute = |key: &HeadKey| {
            t.ancestors(t.leaf("fork").unwrap())
                .map(|n| selectional_association::<f64>(&s, &t, n, key).unwrap())
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let (v, n) = (brute(&q.verb_key()), brute(&q.noun_key()));
        assert_eq!(d.verb_score, Some(v));
        assert_eq!(d.noun_score, Some(n));
        // pizza's best class is the root, whose mass outweighs eat's TOOL
        assert!(n > v);
        assert_eq!(d.choice, Choice::Noun);

        let mut s2 = s.clone();
        s2.add(HeadKey::new("eat", "with"), "knife", 5);
        let d: AttachmentDecision<f64> = sa_decide(&q, &s2, &t);
        let v2 = t
            .ancestors(t.leaf("fork").unwrap())
            .map(|n| selectional_association::<f64>(&s2, &t, n, &q.verb_key()).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(d.verb_score, Some(v2));
        let mut q = quad(Attachment::Noun);
        q.verb = "ghost".into();
        q.noun1 = "phantom".into();
        let d: AttachmentDecision<f64> = sa_decide(&q, &s, &t);
        assert_eq!(d.choice, Choice::Undecided);
        assert_eq!((d.verb_score, d.noun_score), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn curve_endpoints_and_break_even() {
        let t = tax();
        let mut scored = Vec::new();
        for (a, b) in [(1.5, 0.5), (1.2, 1.0), (0.9, 1.1), (2.0, 0.1)] {
            let v = pair(&t, "eat", [a, 1.0], 20);
            let n = pair(&t, "pizza", [b, 1.0], 20);
            let gold = Attachment::Verb;
            let d = decide_attachment(&quad(gold), Some(&v), Some(&n), &t, None).unwrap();
            scored.push((d, gold));
        }
        let curve = coverage_accuracy_curve(&scored, &[f64::INFINITY, 10.0, 1.0, 0.0]).unwrap();
        assert_eq!(curve.points[0].coverage, 0.0);
        assert_eq!(curve.points[3].coverage, 1.0);
        assert_eq!(curve.points[3].accuracy, Some(0.75));
        assert!(curve
            .points
            .windows(2)
            .all(|w| w[0].coverage <= w[1].coverage));
        assert!(coverage_accuracy_curve(&scored, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn break_even_interpolation() {
        let pts = vec![
            CurvePoint {
                threshold: 2.0,
                coverage: 0.2,
                accuracy: Some(1.0),
            },
            CurvePoint {
                threshold: 1.0,
                coverage: 0.6,
                accuracy: Some(0.8),
            },
            CurvePoint {
                threshold: 0.0,
                coverage: 1.0,
                accuracy: Some(0.6),
            },
        ];
        // acc - cov: 0.8, 0.2, -0.4 -> crossing at 0.6 + (0.2 / 0.6) * 0.4
        let be = break_even(&pts).unwrap();
        assert!((be - (0.6 + 0.4 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn table_format() {
        let r = evaluate_choices((0..10).map(|i| {
            (
                if i < 8 {
                    Choice::Noun
                } else {
                    Choice::Undecided
                },
                Attachment::Noun,
            )
        }));
        let table = report_table([("Assoc", &r)]);
        assert_eq!(table, "method\tcoverage\taccuracy\nAssoc\t80.0\t100.0\n");
    }
}
