use crate::store::{self, SUMMARY};
use crate::EvalArgs;
use anyhow::{bail, Context, Result};
use log::{info, warn};
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;
use treecut::corpus::{fold_indices, ingest_triples_with, read_quadruples_with, IdentityStemmer};
use treecut::disambiguation::{curve_tsv, mdl_conditional_decide, report_table, SaModel};
use treecut::format::{read_pair, read_tcm};
use treecut::{
    coverage_accuracy_curve, decide_attachment, evaluate, preprocess_word, Attachment, Choice,
    Decision, EstimationError, EvaluationReport, PairModel, Taxonomy, Tcm, TestQuadruple,
};

/// Lazily loaded per-head models.
struct Models<'a> {
    out: &'a Path,
    t: &'a Taxonomy,
    pairs: HashMap<(String, String), Option<PairModel>>,
    tcms: HashMap<(String, String), Option<Tcm>>,
}

fn load<M>(
    cache: &mut HashMap<(String, String), Option<M>>,
    path: &Path,
    slot: &str,
    head: &str,
    parse: impl FnOnce(&str) -> Result<M>,
) -> Result<()> {
    if let Entry::Vacant(entry) = cache.entry((slot.to_string(), head.to_string())) {
        let model = match fs::read_to_string(path) {
            Ok(text) => Some(parse(&text).with_context(|| format!("parsing {}", path.display()))?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
        };
        entry.insert(model);
    }
    Ok(())
}

impl Models<'_> {
    fn pair(&mut self, slot: &str, head: &str) -> Result<Option<&PairModel>> {
        let t = self.t;
        let path = store::head_file(self.out, slot, head, "atcm");
        load(&mut self.pairs, &path, slot, head, |s| Ok(read_pair(t, s)?))?;
        Ok(self.pairs[&(slot.to_string(), head.to_string())].as_ref())
    }

    fn tcm(&mut self, slot: &str, head: &str) -> Result<Option<&Tcm>> {
        let t = self.t;
        let path = store::head_file(self.out, slot, head, "tcm");
        load(&mut self.tcms, &path, slot, head, |s| Ok(read_tcm(t, s)?))?;
        Ok(self.tcms[&(slot.to_string(), head.to_string())].as_ref())
    }
}

type Scored = Vec<(Decision, Attachment)>;

fn fmt_pct(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.1}"))
}

pub fn run(a: &EvalArgs) -> Result<()> {
    let t = store::read_taxonomy(&a.taxonomy)?;
    if !a.out.join(SUMMARY).is_file() {
        bail!(
            "missing models: {} has no {SUMMARY}; run `treecut fit` first",
            a.out.display()
        );
    }
    if a.folds == 0 {
        bail!("--folds must be at least 1");
    }
    if a.thresholds
        .windows(2)
        .any(|w| w[0].is_nan() || w[1].is_nan() || w[0] < w[1])
    {
        return Err(EstimationError::ThresholdOrder.into());
    }
    let normalize = |w: &str| preprocess_word(w, &IdentityStemmer);
    let reader = BufReader::new(
        File::open(&a.quads).with_context(|| format!("opening {}", a.quads.display()))?,
    );
    let mut quads: Vec<TestQuadruple> = read_quadruples_with(reader, normalize)
        .with_context(|| format!("reading {}", a.quads.display()))?;
    if let Some(slot) = &a.slot {
        quads.retain(|q| &q.prep == slot);
    }
    if quads.is_empty() {
        bail!("no test quadruples to evaluate");
    }

    let mut models = Models {
        out: &a.out,
        t: &t,
        pairs: HashMap::new(),
        tcms: HashMap::new(),
    };
    let sa: Option<BTreeMap<String, SaModel<f64>>> = match &a.triples {
        Some(path) => {
            let reader = BufReader::new(
                File::open(path).with_context(|| format!("opening {}", path.display()))?,
            );
            let sample = ingest_triples_with(reader, normalize)?.known_only(&t);
            let slots: Vec<&str> = quads.iter().map(|q| q.prep.as_str()).collect();
            Some(
                slots
                    .into_iter()
                    .map(|s| (s.to_string(), SaModel::new(&t, &sample.for_slot(s))))
                    .collect(),
            )
        }
        None => {
            warn!("no --triples given; skipping the selectional association baseline");
            None
        }
    };

    let mut methods: Vec<(&str, Scored)> = vec![
        ("MDL", Vec::new()),
        ("SA", Vec::new()),
        ("Assoc", Vec::new()),
    ];
    for q in &quads {
        let vm = models.tcm(&q.prep, &q.verb)?.cloned();
        let nm = models.tcm(&q.prep, &q.noun1)?;
        methods[0]
            .1
            .push((mdl_conditional_decide(q, vm.as_ref(), nm, &t, None), q.gold));
        if let Some(sa) = &sa {
            methods[1].1.push((sa[&q.prep].decide(q, &t, None), q.gold));
        }
        let vp = models.pair(&q.prep, &q.verb)?.cloned();
        let np = models.pair(&q.prep, &q.noun1)?;
        methods[2]
            .1
            .push((decide_attachment(q, vp.as_ref(), np, &t, None)?, q.gold));
    }
    if sa.is_none() {
        methods.remove(1);
    }
    let default: Scored = quads
        .iter()
        .map(|q| {
            let d = Decision {
                choice: Choice::Noun,
                ..Decision::undecided()
            };
            (d, q.gold)
        })
        .collect();

    let dir = a.out.join("eval");
    fs::create_dir_all(&dir)?;
    let mut rows: Vec<(&str, EvaluationReport)> = vec![("Default", evaluate(&default))];
    rows.extend(methods.iter().map(|(name, s)| (*name, evaluate(s))));
    fs::write(
        dir.join("table.tsv"),
        report_table(rows.iter().map(|(n, r)| (*n, r))),
    )?;
    for (name, r) in &rows {
        info!(
            "{name}: coverage {:.1}%, accuracy {}",
            r.coverage,
            fmt_pct(r.accuracy)
        );
    }

    let mut break_even = String::from("method\tbreak_even\n");
    for (name, scored) in &methods {
        let curve = coverage_accuracy_curve(scored, &a.thresholds)?;
        fs::write(
            dir.join(format!("curve_{}.tsv", name.to_lowercase())),
            curve_tsv(&curve),
        )?;
        let be = curve
            .break_even
            .map_or_else(|| "NA".to_string(), |b| format!("{b:.6}"));
        writeln!(break_even, "{name}\t{be}")?;
    }
    fs::write(dir.join("break_even.tsv"), break_even)?;

    let mut folds = String::from("fold\tmethod\tn_test\tcoverage\taccuracy\n");
    for (k, idx) in fold_indices(quads.len(), a.folds, a.seed)
        .iter()
        .enumerate()
    {
        let mut all: Vec<(&str, &Scored)> = vec![("Default", &default)];
        all.extend(methods.iter().map(|(n, s)| (*n, s)));
        for (name, scored) in all {
            let part: Scored = idx.iter().map(|&i| scored[i]).collect();
            let r = evaluate(&part);
            writeln!(
                folds,
                "{}\t{name}\t{}\t{}\t{}",
                k + 1,
                r.n_test,
                fmt_pct(Some(r.coverage)),
                fmt_pct(r.accuracy)
            )?;
        }
    }
    fs::write(dir.join("folds.tsv"), folds)?;
    Ok(())
}
