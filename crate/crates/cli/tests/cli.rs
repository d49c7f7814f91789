use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;
use treecut::oracle::{
    plant_on_marginal, plant_random, random_taxonomy, sample_from_pair, PlantedModel,
};
use treecut::HeadKey;

fn treecut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treecut"))
        .args(args)
        .env("TREECUT_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BIRDS: &str = "(BIRD swallow crow robin)\n";
const TRIPLES: &str = "\
# head\tslot\tvalue\tcount
fly\tsubj\tswallow\t4
fly\tsubj\tcrow\t7
fly\tsubj\trobin\t1
sing\tsubj\tswallow\t38
sing\tsubj\tcrow\t59
sing\tsubj\trobin\t8
";

struct Fitted {
    dir: TempDir,
    taxonomy: String,
    triples: String,
    out: PathBuf,
}

fn fit_birds() -> Fitted {
    let dir = TempDir::new().unwrap();
    let taxonomy = write(dir.path(), "t.sexp", BIRDS);
    let triples = write(dir.path(), "triples.tsv", TRIPLES);
    let out = dir.path().join("models");
    let o = treecut(&[
        "fit",
        "--taxonomy",
        &taxonomy,
        "--triples",
        &triples,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    Fitted {
        dir,
        taxonomy,
        triples,
        out,
    }
}

fn files(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(root).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn fit_writes_leaf_marginal_and_bird_association() {
    let f = fit_birds();
    let marginal = fs::read_to_string(f.out.join("subj/_marginal.tcm")).unwrap();
    assert!(
        marginal.starts_with("cut\tBIRD/swallow\tBIRD/crow\tBIRD/robin\n"),
        "{marginal}"
    );
    assert!(marginal.contains("N\t117\n"));
    let fly = fs::read_to_string(f.out.join("subj/fly.atcm")).unwrap();
    assert!(fly.contains("\ncut\tBIRD\n"), "{fly}");
    assert!(fly.contains("\nA\t1.0000000000000000e0\n"), "{fly}");
    assert!(f.out.join("subj/fly.tcm").is_file());
    let summary = fs::read_to_string(f.out.join("fit_summary.tsv")).unwrap();
    assert!(
        summary.lines().any(|l| l.starts_with("subj\tfly\t12\t1\t")),
        "{summary}"
    );
}

#[test]
fn refit_is_byte_identical() {
    let f = fit_birds();
    let first = files(&f.out);
    let again = f.dir.path().join("again");
    let o = treecut(&[
        "fit",
        "--taxonomy",
        &f.taxonomy,
        "--triples",
        &f.triples,
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(first, files(&again));
}

#[test]
fn unknown_words_only_is_an_error() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.sexp", BIRDS);
    let tr = write(dir.path(), "tr.tsv", "fly\tsubj\tbee\t3\n");
    let out = dir.path().join("m");
    let o = treecut(&[
        "fit",
        "--taxonomy",
        &t,
        "--triples",
        &tr,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty usable sample"));
}

#[test]
fn eval_writes_reports_and_folds() {
    let f = fit_birds();
    let quads: String = (0..23)
        .map(|i| {
            format!(
                "fly\tsing\tsubj\t{}\t{}\n",
                ["swallow", "crow", "robin"][i % 3],
                if i % 2 == 0 { "V" } else { "N" }
            )
        })
        .collect();
    let q = write(f.dir.path(), "q.tsv", &quads);
    let out = f.out.to_str().unwrap();
    let o = treecut(&[
        "eval",
        "--taxonomy",
        &f.taxonomy,
        "--quads",
        &q,
        "--triples",
        &f.triples,
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let eval = f.out.join("eval");
    let table = fs::read_to_string(eval.join("table.tsv")).unwrap();
    let methods: Vec<&str> = table
        .lines()
        .skip(1)
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(methods, ["Default", "MDL", "SA", "Assoc"]);
    assert!(table.contains("Default\t100.0\t"), "{table}");
    for m in ["mdl", "sa", "assoc"] {
        assert!(eval.join(format!("curve_{m}.tsv")).is_file());
    }
    let folds = fs::read_to_string(eval.join("folds.tsv")).unwrap();
    let sizes: Vec<usize> = folds
        .lines()
        .skip(1)
        .filter(|l| l.split('\t').nth(1) == Some("Default"))
        .map(|l| l.split('\t').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sizes.len(), 10);
    assert_eq!(sizes.iter().sum::<usize>(), 23);
    assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
}

#[test]
fn unknown_noun2_leaves_everything_undecided() {
    let f = fit_birds();
    let q = write(
        f.dir.path(),
        "q.tsv",
        "fly\tsing\tsubj\tpenguin\tV\nfly\tsing\tsubj\tostrich\tN\n",
    );
    let o = treecut(&[
        "eval",
        "--taxonomy",
        &f.taxonomy,
        "--quads",
        &q,
        "--out",
        f.out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(f.out.join("eval/table.tsv")).unwrap();
    assert!(table.contains("\nAssoc\t0.0\tNA\n"), "{table}");
    assert!(!table.contains("\nSA\t"));
}

#[test]
fn eval_without_models_fails() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.sexp", BIRDS);
    let q = write(dir.path(), "q.tsv", "fly\tsing\tsubj\tcrow\tV\n");
    let o = treecut(&[
        "eval",
        "--taxonomy",
        &t,
        "--quads",
        &q,
        "--out",
        dir.path().join("none").to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing models"));
}

#[test]
fn eval_rejects_ascending_thresholds() {
    let f = fit_birds();
    let q = write(f.dir.path(), "q.tsv", "fly\tsing\tsubj\tcrow\tV\n");
    let o = treecut(&[
        "eval",
        "--taxonomy",
        &f.taxonomy,
        "--quads",
        &q,
        "--out",
        f.out.to_str().unwrap(),
        "--thresholds",
        "0,1",
    ]);
    assert!(!o.status.success());
}

#[test]
fn planted_benchmark_is_solved() {
    let dir = TempDir::new().unwrap();
    // first seed whose two heads disagree by a factor of 2 somewhere
    let (t, triples, quads) = (0u64..)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_taxonomy(&mut rng, 12);
            let base = plant_random::<f64>(&mut rng, &t, HeadKey::new("base", "with"), 4).unwrap();
            let mut triples = String::new();
            let mut planted = Vec::new();
            for (i, head) in ["see", "dog"].iter().enumerate() {
                let model = plant_on_marginal(
                    &mut rng,
                    &t,
                    base.marginal(),
                    HeadKey::new(*head, "with"),
                    4,
                )
                .unwrap();
                let pm = PlantedModel {
                    model,
                    seed,
                    schedule: vec![10_000],
                    background_size: 200_000,
                };
                let s = sample_from_pair(&pm, &t, 10_000, seed * 2 + i as u64).unwrap();
                for (w, c) in &s.slice.counts {
                    triples.push_str(&format!("{head}\twith\t{w}\t{c}\n"));
                }
                if i == 0 {
                    for (w, c) in &s.background {
                        triples.push_str(&format!("other\twith\t{w}\t{c}\n"));
                    }
                }
                planted.push(pm.model);
            }
            let mut quads = String::new();
            for &leaf in t.leaves() {
                let w = t.label(leaf);
                let av = planted[0].assoc().value_for_word(&t, w).unwrap();
                let an = planted[1].assoc().value_for_word(&t, w).unwrap();
                if av.max(an) >= 2.0 * av.min(an) {
                    quads.push_str(&format!(
                        "see\tdog\twith\t{w}\t{}\n",
                        if av > an { "V" } else { "N" }
                    ));
                }
            }
            (t, triples, quads)
        })
        .find(|(_, _, q)| q.lines().count() >= 3)
        .unwrap();
    let tax = write(dir.path(), "t.sexp", &t.to_sexpr());
    let tr = write(dir.path(), "tr.tsv", &triples);
    let q = write(dir.path(), "q.tsv", &quads);
    let out = dir.path().join("m");
    let out = out.to_str().unwrap();
    assert!(
        treecut(&["fit", "--taxonomy", &tax, "--triples", &tr, "--out", out])
            .status
            .success()
    );
    let o = treecut(&[
        "eval",
        "--taxonomy",
        &tax,
        "--quads",
        &q,
        "--out",
        out,
        "--folds",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(Path::new(out).join("eval/table.tsv")).unwrap();
    assert!(
        table.contains("\nAssoc\t100.0\t100.0\n"),
        "{table}\n{quads}"
    );
}

#[test]
fn verify_passes_and_mutation_fails() {
    let ok = treecut(&["verify", "--instances", "40"]);
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(ok.status.success(), "{stdout}");
    assert!(stdout.lines().all(|l| !l.starts_with("FAIL")));
    let bad = treecut(&["verify", "--instances", "40", "--mutate-penalty"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

#[test]
fn verify_skips_trees_above_cap() {
    let o = treecut(&["verify", "--instances", "10", "--cap", "2"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    assert!(stdout.contains("above cap 2, skipped"), "{stdout}");
}
