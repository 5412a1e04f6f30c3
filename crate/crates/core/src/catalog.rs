//! The 56 known diminimal toroidal polyhedral maps.
//!
//! Names are positional: the first 53 lines are H1 to H53, then R1, R2
//! and S1.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::canon::{canonical_code, CanonicalCode};
use crate::map::EmbeddedMap;
use crate::moves::is_diminimal;
use crate::plantri::parse_line;
use crate::polyhedral::is_tpm;

const CATALOG: &str = include_str!("../data/catalog.txt");

/// Diminimal map counts for 7 through 15 vertices.
pub const DIMINIMAL_COUNTS: [(usize, usize); 9] =
    [(7, 1), (8, 2), (9, 11), (10, 19), (11, 15), (12, 5), (13, 2), (14, 1), (15, 0)];

/// TPM counts for 7 through 15 vertices.
pub const TPM_COUNTS: [(usize, u64); 9] = [
    (7, 1),
    (8, 33),
    (9, 4713),
    (10, 442429),
    (11, 28635972),
    (12, 1417423218),
    (13, 58321972887),
    (14, 2102831216406),
    (15, 68781200467456),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub line: &'static str,
    pub order: usize,
}

impl CatalogEntry {
    pub fn map(&self) -> EmbeddedMap {
        parse_line(self.line).expect("catalog lines parse")
    }
}

pub fn catalog_lines() -> impl Iterator<Item = &'static str> {
    CATALOG.lines().filter(|l| !l.trim().is_empty())
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    catalog_lines()
        .enumerate()
        .map(|(i, line)| {
            let name = match i {
                0..=52 => format!("H{}", i + 1),
                53 | 54 => format!("R{}", i - 52),
                _ => format!("S{}", i - 54),
            };
            let order = line.split(' ').next().and_then(|n| n.parse().ok()).unwrap_or(0);
            CatalogEntry { name, line, order }
        })
        .collect()
}

/// Canonical codes of every catalog map.
pub fn catalog_codes() -> HashSet<CanonicalCode> {
    catalog_entries().iter().map(|e| canonical_code(&e.map()).expect("connected")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryReport {
    pub name: String,
    pub order: usize,
    pub code: Option<CanonicalCode>,
    /// Empty when the entry passes.
    pub problems: Vec<String>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub distinct_codes: usize,
    pub tallies: BTreeMap<usize, usize>,
    pub tallies_match: bool,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(EntryReport::passed) && self.distinct_codes == self.entries.len() && self.tallies_match
    }
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            if e.passed() {
                writeln!(f, "{} PASS n={}", e.name, e.order)?;
            } else {
                writeln!(f, "{} FAIL {}", e.name, e.problems.join("; "))?;
            }
        }
        let tallies: Vec<String> =
            DIMINIMAL_COUNTS.iter().map(|(n, _)| self.tallies.get(n).copied().unwrap_or(0).to_string()).collect();
        writeln!(f, "distinct codes: {}/{}", self.distinct_codes, self.entries.len())?;
        writeln!(
            f,
            "tallies n=7..15: {} ({})",
            tallies.join(","),
            if self.tallies_match { "match" } else { "MISMATCH" }
        )?;
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn verify_catalog() -> CatalogReport {
    let entries: Vec<(String, &str)> = catalog_entries().into_iter().map(|e| (e.name, e.line)).collect();
    verify_lines(&entries)
}

/// Checks named plantri lines as a catalog: each must parse and be a
/// diminimal TPM, codes must be distinct, and tallies must match the
/// diminimal counts.
pub fn verify_lines(entries: &[(String, &str)]) -> CatalogReport {
    let reports: Vec<EntryReport> = entries.par_iter().map(|(name, line)| check_entry(name, line)).collect();
    let distinct_codes = reports.iter().filter_map(|r| r.code.clone()).collect::<HashSet<_>>().len();
    let mut tallies = BTreeMap::new();
    for r in reports.iter().filter(|r| r.passed()) {
        *tallies.entry(r.order).or_insert(0) += 1;
    }
    let tallies_match = DIMINIMAL_COUNTS.iter().all(|&(n, c)| tallies.get(&n).copied().unwrap_or(0) == c)
        && tallies.keys().all(|n| (7..=15).contains(n));
    CatalogReport { entries: reports, distinct_codes, tallies, tallies_match }
}

fn check_entry(name: &str, line: &str) -> EntryReport {
    let mut report = EntryReport { name: name.to_string(), order: 0, code: None, problems: Vec::new() };
    let map = match parse_line(line) {
        Ok(m) => m,
        Err(e) => {
            report.problems.push(format!("parse: {e}"));
            return report;
        }
    };
    report.order = map.vertex_count();
    report.code = canonical_code(&map).ok();
    let verdict = is_tpm(&map);
    if !verdict.is_tpm() {
        let reasons: Vec<String> = verdict.failure_reasons.iter().map(ToString::to_string).collect();
        report.problems.push(format!("not a TPM: {}", reasons.join(",")));
    } else if !is_diminimal(&map).unwrap_or(false) {
        report.problems.push("not diminimal".to_string());
    }
    report
}
