mod common;

use compmetrics::reconfig::SearchMode;

const CASES: u32 = 1000;

#[test]
fn wmc_and_wcm_are_additive() {
    common::wmc_wcm_additivity(CASES).unwrap();
}

#[test]
fn dit_is_parent_plus_one() {
    common::dit_recurrence(CASES).unwrap();
}

#[test]
fn noc_sums_to_edge_count() {
    common::noc_sum(CASES).unwrap();
}

#[test]
fn cbom_is_additive_under_reassignment() {
    common::cbom_additivity(CASES).unwrap();
}

#[test]
fn selection_threshold_is_antitone() {
    common::threshold_antitone(CASES).unwrap();
}

#[test]
fn ledger_folds_and_round_trips() {
    common::ledger_fold_and_round_trip(CASES).unwrap();
}

#[test]
fn fact_files_round_trip() {
    common::fact_file_round_trip(CASES).unwrap();
}

#[test]
fn exact_partition_matches_brute_force() {
    common::partition_matches_oracle(CASES, SearchMode::Exact).unwrap();
}

#[test]
fn heuristic_partition_matches_brute_force() {
    common::partition_matches_oracle(CASES, SearchMode::Heuristic).unwrap();
}

#[test]
fn minioo_prints_parses_and_builds_valid_cfgs() {
    common::minioo_round_trip_and_cfg(CASES).unwrap();
}
