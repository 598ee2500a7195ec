//! Bank generation, report plumbing, suite dispatch and the binary's
//! subcommands.

use std::process::Command;

use tracelab::bank::{bank_profiles, generate_bank, tail_mass, MemberKind, Packet, Profile, TAIL_MASS_LIMIT};
use tracelab::config::{default_config, BankConfig, GridConfig, SuiteConfig};
use tracelab::report::{ReportFormat, SuiteReport};
use tracelab::suites::{run_suite, run_suite_with_threads, SUITE_NAMES};
use tracelab::CliError;
use tracelab_core::lp::{build_lp_system, LpGenerator};

fn grid_1d() -> GridConfig {
    GridConfig::new(vec![4096], 16.0 * std::f64::consts::PI, 8)
}

fn small_partition() -> SuiteConfig {
    SuiteConfig::with_patch("partition", &serde_json::json!({ "bank": { "size": 6 } })).unwrap()
}

#[test]
fn bank_is_deterministic_and_sized() {
    let cfg = BankConfig { size: 10, seed: 7 };
    let a = generate_bank(&cfg, &grid_1d()).unwrap();
    let b = generate_bank(&cfg, &grid_1d()).unwrap();
    assert_eq!(a.len(), 10);
    assert_eq!(a, b);
    let c = generate_bank(&BankConfig { size: 10, seed: 8 }, &grid_1d()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn bank_tail_mass_is_negligible() {
    for grid in [grid_1d(), GridConfig::new(vec![128, 128], 16.0 * std::f64::consts::PI, 3)] {
        for f in generate_bank(&BankConfig { size: 24, seed: 3 }, &grid).unwrap() {
            assert!(tail_mass(&f, grid.n_blocks) <= TAIL_MASS_LIMIT);
        }
    }
}

#[test]
fn bank_covers_every_member_kind() {
    let kinds: Vec<MemberKind> = bank_profiles(&BankConfig { size: 8, seed: 1 }, &grid_1d()).unwrap().iter().map(|p| p.kind).collect();
    for k in [MemberKind::BlockSpectrum, MemberKind::ModulatedBump, MemberKind::Dilate, MemberKind::BoundaryBump] {
        assert!(kinds.contains(&k), "{k:?} missing");
    }
}

/// Index of the block carrying most of the ℓ² energy.
fn dominant_block(f: &tracelab_core::GridFunction64, sys: &tracelab_core::LpSystem64) -> usize {
    let blocks = sys.blocks(f).unwrap();
    let energy: Vec<f64> = blocks.iter().map(|b| b.data().iter().map(|z| z.norm_sqr()).sum()).collect();
    energy.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0
}

#[test]
fn dilation_by_two_moves_the_spectrum_one_block_up() {
    let cfg = grid_1d();
    let grid = cfg.build().unwrap();
    let sys = build_lp_system(LpGenerator::standard(), cfg.n_blocks, &grid).unwrap();
    for freq in [3.0, 6.0, 12.0, 24.0] {
        let f = Profile {
            label: "probe".into(),
            kind: MemberKind::ModulatedBump,
            packets: vec![Packet { center: vec![0.0], width: vec![2.0], freq: vec![freq], amp: (1.0, 0.0) }],
        };
        let n = dominant_block(&f.sample(&grid), &sys);
        let n2 = dominant_block(&f.dilate(2.0).sample(&grid), &sys);
        assert_eq!(n2, n + 1, "carrier {freq}");
    }
}

#[test]
fn infeasible_block_count_is_an_error() {
    let cfg = GridConfig::new(vec![64], 16.0 * std::f64::consts::PI, 8);
    assert!(matches!(generate_bank(&BankConfig { size: 2, seed: 0 }, &cfg), Err(CliError::Infeasible(_))));
}

#[test]
fn unknown_suite_is_an_error() {
    let cfg = small_partition();
    assert!(matches!(run_suite("no-such-suite", &cfg), Err(CliError::UnknownSuite(_))));
    assert!(matches!(default_config("no-such-suite"), Err(CliError::UnknownSuite(_))));
    assert!(SUITE_NAMES.iter().all(|n| default_config(n).is_ok()));
}

#[test]
fn report_round_trips_and_re_emits_identically() {
    let rep = run_suite("partition", &small_partition()).unwrap();
    assert!(rep.passed);
    assert!(rep.recompute_passes().is_empty());
    let json = rep.to_json().unwrap();
    let back = SuiteReport::from_json(&json).unwrap();
    assert_eq!(back, rep);
    assert_eq!(back.to_json().unwrap(), json);
    assert_eq!(rep.to_json().unwrap(), json);

    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    rep.emit(&a, ReportFormat::Json).unwrap();
    rep.emit(&b, ReportFormat::Json).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn csv_has_one_row_per_case() {
    let rep = run_suite("partition", &small_partition()).unwrap();
    let csv = rep.to_csv().unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.records().count(), rep.cases.len());
}

#[test]
fn report_cases_do_not_depend_on_the_thread_count() {
    let cfg = small_partition();
    let one = run_suite_with_threads("partition", &cfg, Some(1)).unwrap();
    let four = run_suite_with_threads("partition", &cfg, Some(4)).unwrap();
    assert_eq!(one.cases, four.cases);
    assert_eq!(one.aggregates, four.aggregates);
}

#[test]
fn config_for_another_suite_is_refused() {
    let cfg = small_partition();
    assert!(run_suite("hardy", &cfg).is_err());
}

fn tracelab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tracelab"))
}

#[test]
fn query_subcommand_prints_json() {
    let out = tracelab().args(["query", "trace", "m=0", "W[k=1,p=2]"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "B[s=1/2,p=2,q=2,gamma=0,d=1,r=1,dom=bdry]");
    assert_eq!(v["result"]["citations"][0]["rule_id"], "trace.sobolev_muckenhoupt");

    let bad = tracelab().args(["query", "trace m=0 W[k=1,p=2"]).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("column"));
}

#[test]
fn suite_subcommand_writes_reports_and_sets_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"bank": {"size": 4}}"#).unwrap();
    for (fmt, file) in [("json", "r.json"), ("csv", "r.csv")] {
        let path = dir.path().join(file);
        let status = tracelab()
            .args(["suite", "partition", "--config"])
            .arg(&cfg)
            .arg("--report")
            .arg(&path)
            .args(["--format", fmt])
            .env("TRACELAB_THREADS", "2")
            .status()
            .unwrap();
        assert!(status.success());
        assert!(std::fs::metadata(&path).unwrap().len() > 0);
    }
    let rep = SuiteReport::from_json(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(rep.config.bank.size, 4);

    // A gate that cannot hold makes the run fail.
    std::fs::write(&cfg, r#"{"bank": {"size": 4}, "tolerances": {"synthesis": -1.0}}"#).unwrap();
    let status = tracelab().args(["suite", "partition", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn bank_subcommand_exports_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bank");
    let status = tracelab().args(["bank", "--seed", "7", "--size", "5", "--out"]).arg(&out).status().unwrap();
    assert!(status.success());
    let expected = generate_bank(&BankConfig { size: 5, seed: 7 }, &default_config("partition").unwrap().grid).unwrap();
    for (i, f) in expected.iter().enumerate() {
        let stored = tracelab_core::io::load::<f64>(out.join(format!("member_{i:03}.wtlb"))).unwrap();
        assert_eq!(&stored.function, f);
    }
    assert!(out.join("manifest.json").exists());
}
