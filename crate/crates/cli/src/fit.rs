use crate::store::{self, MARGINAL, SUMMARY};
use crate::FitArgs;
use anyhow::{bail, Context, Result};
use log::{info, warn};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufReader;
use treecut::corpus::{ingest_triples_with, IdentityStemmer};
use treecut::format::{write_pair, write_tcm};
use treecut::{
    find_mdl, find_mdl_with, fit_heads, preprocess_word, ClassCounts, Scalar, SearchOptions, Tcm,
};

pub fn run(a: &FitArgs) -> Result<()> {
    let t = store::read_taxonomy(&a.taxonomy)?;
    let reader = BufReader::new(
        File::open(&a.triples)
            .with_context(|| format!("opening triples {}", a.triples.display()))?,
    );
    let sample = ingest_triples_with(reader, |w| preprocess_word(w, &IdentityStemmer))
        .with_context(|| format!("reading triples {}", a.triples.display()))?;
    let unknown: u64 = sample.unknown_values(&t).values().sum();
    if unknown > 0 {
        warn!(
            "{unknown} of {} occurrences have values outside the taxonomy and are ignored",
            sample.total()
        );
    }
    let known = sample.known_only(&t);
    if known.is_empty() {
        bail!("empty usable sample: no triple value is a leaf of the taxonomy");
    }
    let slots: Vec<String> = match &a.slot {
        Some(s) if known.slots().contains(&s.as_str()) => vec![s.clone()],
        Some(s) => bail!("no usable triples for slot {s:?}"),
        None => known.slots().into_iter().map(String::from).collect(),
    };
    let opts = match a.epsilon {
        Some(e) => SearchOptions::with_epsilon(e),
        None => SearchOptions::default(),
    };

    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut summary = String::from("slot\thead\tslice_size\tclasses\tbits\tconditional_classes\n");
    for slot in &slots {
        let s = known.for_slot(slot);
        let counts = ClassCounts::new(&t, &s.project_values());
        let (marginal, bits): (Tcm, f64) = find_mdl_with(&t, &counts, &opts)?;
        info!(
            "slot {slot}: marginal over {} classes, {bits:.3} bits",
            marginal.cut().len()
        );
        let dir = store::slot_dir(&a.out, slot);
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(MARGINAL), write_tcm(&t, &marginal))?;
        writeln!(
            summary,
            "{slot}\t{MARGINAL}\t{}\t{}\t{bits}\t",
            s.total(),
            marginal.cut().len()
        )?;

        let keys: Vec<_> = s.heads().cloned().collect();
        for (key, fit) in keys.iter().zip(fit_heads(&t, &s, &marginal, &keys, &opts)) {
            let fit = fit.with_context(|| format!("fitting {key}"))?;
            let pair = fit.model;
            let residual = pair.stochastic_residual(&t);
            if residual.abs() > f64::stochastic_tolerance() {
                warn!("{key}: stochastic residual {residual:e}");
            }
            let slice = s.slice_by_head(key);
            let conditional: Tcm = find_mdl(&t, &ClassCounts::new(&t, &slice.counts))?;
            info!(
                "{key}: {} association classes, {:.3} bits, {} occurrences",
                pair.assoc().cut().len(),
                fit.bits,
                slice.size()
            );
            fs::write(
                store::head_file(&a.out, slot, &key.head, "atcm"),
                write_pair(&t, &pair),
            )?;
            fs::write(
                store::head_file(&a.out, slot, &key.head, "tcm"),
                write_tcm(&t, &conditional),
            )?;
            writeln!(
                summary,
                "{slot}\t{}\t{}\t{}\t{}\t{}",
                key.head,
                slice.size(),
                pair.assoc().cut().len(),
                fit.bits,
                conditional.cut().len()
            )?;
        }
    }
    fs::write(a.out.join(SUMMARY), summary)?;
    Ok(())
}
