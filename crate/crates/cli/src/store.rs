//! Layout of the model directory.
//!
//! ```text
//! <out>/fit_summary.tsv
//! <out>/<slot>/_marginal.tcm
//! <out>/<slot>/<head>.atcm     pair model
//! <out>/<slot>/<head>.tcm      conditional tree cut model of the head
//! ```
//!
//! Slot and head names are percent-encoded outside `[A-Za-z0-9.-]`, so no
//! encoded name starts with `_`.

use anyhow::{Context, Result};
use std::fs;
use std::path::{Path, PathBuf};
use treecut::Taxonomy;

pub const SUMMARY: &str = "fit_summary.tsv";
pub const MARGINAL: &str = "_marginal.tcm";

pub fn encode(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for b in name.bytes() {
        if b.is_ascii_alphanumeric() || b == b'.' || b == b'-' {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    if out == "." || out == ".." {
        out = out.replace('.', "%2E");
    }
    out
}

pub fn slot_dir(out: &Path, slot: &str) -> PathBuf {
    out.join(encode(slot))
}

pub fn head_file(out: &Path, slot: &str, head: &str, ext: &str) -> PathBuf {
    slot_dir(out, slot).join(format!("{}.{ext}", encode(head)))
}

pub fn read_taxonomy(path: &Path) -> Result<Taxonomy> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading taxonomy {}", path.display()))?;
    Taxonomy::parse(&text).with_context(|| format!("parsing taxonomy {}", path.display()))
}
