//! Summaries of finished run directories.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{io_err, CliError, Result};
use crate::manifest::{RunManifest, MANIFEST_FILE};

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub run: String,
    pub kind: String,
    pub config_hash: String,
    pub check: String,
    pub passed: bool,
}

/// Every manifest in `dir` or its immediate subdirectories, sorted by path.
pub fn collect(dir: &Path) -> Result<Vec<(PathBuf, RunManifest)>> {
    if !dir.is_dir() {
        return Err(CliError::Missing(dir.display().to_string()));
    }
    let mut dirs = vec![dir.to_path_buf()];
    let mut subs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subs.sort();
    dirs.extend(subs);
    let mut out = Vec::new();
    for d in dirs {
        if d.join(MANIFEST_FILE).is_file() {
            let m = RunManifest::read(&d)?;
            out.push((d, m));
        }
    }
    Ok(out)
}

pub fn rows(dir: &Path) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (path, m) in collect(dir)? {
        let run = path.strip_prefix(dir).ok().map(|p| p.display().to_string()).filter(|s| !s.is_empty());
        let run = run.unwrap_or_else(|| ".".into());
        for c in &m.checks {
            rows.push(ReportRow {
                run: run.clone(),
                kind: m.kind.clone(),
                config_hash: m.config_hash[..12.min(m.config_hash.len())].to_string(),
                check: c.name.clone(),
                passed: c.passed,
            });
        }
    }
    Ok(rows)
}

/// Plain fixed-width table; a header line only when there are no rows.
pub fn format_table(rows: &[ReportRow]) -> String {
    let head = ["run", "kind", "config", "check", "result"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            [r.run.clone(), r.kind.clone(), r.config_hash.clone(), r.check.clone(), verdict.to_string()]
        })
        .collect();
    let mut width = head.map(str::len);
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |cols: &[&str]| {
        let parts: Vec<String> = cols.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&head);
    for row in &cells {
        line(&row.each_ref().map(String::as_str));
    }
    out
}
