use std::fs;
use std::path::Path;

use bbpgmo::Status;
use bbpgmo_bench::campaign::{dominated_count, point_hash, ExperimentSummary};
use bbpgmo_bench::export::{RAW_HEADER, SUMMARY_HEADER, TIME_COLUMNS};
use bbpgmo_bench::spec::{parse_algos, ExperimentSpec};
use bbpgmo_bench::{export_results, run_campaign};

fn spec(problem: &str, algos: &str, trials: usize) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(problem.parse().unwrap(), parse_algos(algos).unwrap());
    s.trials = trials;
    s
}

#[test]
fn identical_algorithms_give_identical_rows() {
    let s = spec("JOS1a", "bbpgmo,bbpgmo", 1);
    let out = run_campaign(&s).unwrap();
    assert_eq!(out.raw.len(), 2);
    let (a, b) = (&out.raw[0], &out.raw[1]);
    assert_eq!(a.x0_hash, b.x0_hash);
    assert_eq!((a.status, a.iters, a.feval), (b.status, b.iters, b.feval));
    assert_eq!(a.final_x, b.final_x);
    assert_eq!(a.final_f, b.final_f);
}

#[test]
fn algorithms_share_starts_within_a_trial() {
    let s = spec("BK1", "bbpgmo,pgmo_ls,pgmo_L,abbpgmo", 5);
    let out = run_campaign(&s).unwrap();
    assert_eq!(out.raw.len(), 20);
    for (t, chunk) in out.raw.chunks(4).enumerate() {
        let labels: Vec<&str> = chunk.iter().map(|r| r.algo.as_str()).collect();
        assert_eq!(labels, ["bbpgmo", "pgmo_ls", "pgmo_L", "abbpgmo"]);
        assert!(chunk.iter().all(|r| r.trial == t));
        assert!(chunk
            .iter()
            .all(|r| r.x0_hash == point_hash(&out.starts[t])));
    }
    assert_ne!(out.raw[0].x0_hash, out.raw[4].x0_hash);
    assert_eq!(out.hard_failures(), 0);
}

#[test]
fn thread_count_does_not_change_results() {
    let mut s = spec("quadratic:n=4,xl=-2,xu=2", "bbpgmo,pgmo_mu", 12);
    s.jobs = Some(1);
    let one = run_campaign(&s).unwrap();
    s.jobs = Some(4);
    let four = run_campaign(&s).unwrap();
    for (a, b) in one.raw.iter().zip(&four.raw) {
        assert_eq!(
            (a.trial, &a.algo, a.iters, &a.final_x),
            (b.trial, &b.algo, b.iters, &b.final_x)
        );
    }
}

#[test]
fn iteration_limit_counts_as_failure_but_stays_in_means() {
    let mut s = spec("quadratic:n=10,xl=-2,xu=2", "pgmo_mu", 4);
    s.max_iters = 2;
    let out = run_campaign(&s).unwrap();
    assert!(out.raw.iter().all(|r| r.status == Status::MaxIters));
    let row = out.row("pgmo_mu").unwrap();
    assert_eq!(row.failures, 4);
    assert_eq!(row.hard_failures, 0);
    assert_eq!(row.iter_mean, 2.0);
}

/// CSV text with the time columns blanked.
fn without_time(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    let drop: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| TIME_COLUMNS.contains(h))
        .map(|(i, _)| i)
        .collect();
    let mut rows = vec![header.iter().map(String::from).collect()];
    for rec in r.records() {
        let rec = rec.unwrap();
        rows.push(
            rec.iter()
                .enumerate()
                .map(|(i, v)| {
                    if drop.contains(&i) {
                        String::new()
                    } else {
                        v.to_string()
                    }
                })
                .collect(),
        );
    }
    rows
}

#[test]
fn reruns_export_identical_tables() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec("JOS1b", "bbpgmo,pgmo_ls,abbpgmo:tau=3", 8);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    export_results(&run_campaign(&s).unwrap(), &a).unwrap();
    export_results(&run_campaign(&s).unwrap(), &b).unwrap();
    for name in ["summary.csv", "raw.csv", "pareto.csv"] {
        assert_eq!(
            without_time(&a.join(name)),
            without_time(&b.join(name)),
            "{name}"
        );
    }
    let pareto = fs::read_to_string(a.join("pareto.csv")).unwrap();
    assert!(pareto.starts_with("trial,algo,status,F1,F2,x1,"));
    assert!(a.join("pareto_values.svg").exists());
    let svg = fs::read_to_string(a.join("pareto_values.svg")).unwrap();
    assert!(svg.contains("abbpgmo:tau=3") && svg.ends_with("</svg>\n"));
}

#[test]
fn empty_campaign_writes_headers_only() {
    let dir = tempfile::tempdir().unwrap();
    let summary = ExperimentSummary {
        problem: "empty".into(),
        n: 2,
        m: 2,
        starts: vec![],
        rows: vec![],
        raw: vec![],
    };
    export_results(&summary, dir.path()).unwrap();
    let summary_csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary_csv.trim_end(), SUMMARY_HEADER.join(","));
    let raw_csv = fs::read_to_string(dir.path().join("raw.csv")).unwrap();
    assert_eq!(raw_csv.trim_end(), RAW_HEADER.join(","));
}

#[test]
fn three_objectives_skip_value_plot_with_notice() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_campaign(&spec("FDS", "bbpgmo", 2)).unwrap();
    assert_eq!(out.m, 3);
    let exported = export_results(&out, dir.path()).unwrap();
    assert!(!dir.path().join("pareto_values.svg").exists());
    assert!(!dir.path().join("pareto_variables.svg").exists());
    assert_eq!(exported.notices.len(), 1);
    assert!(exported.notices[0].contains("m = 3"));
    let pareto = fs::read_to_string(dir.path().join("pareto.csv")).unwrap();
    assert!(pareto.starts_with("trial,algo,status,F1,F2,F3,x1,"));
}

#[test]
fn export_into_a_file_path_reports_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = run_campaign(&spec("BK1", "bbpgmo", 1)).unwrap();
    let err = export_results(&out, &blocker).unwrap_err();
    assert!(format!("{err:#}").contains("file"));
}

#[test]
fn domination_needs_every_objective_beyond_tolerance() {
    let pts = vec![
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![2.0, 2.0],
        vec![0.0, 1.0 + 1e-9],
    ];
    assert_eq!(dominated_count(&pts, 1e-6), 1);
    assert_eq!(dominated_count(&pts[..2], 0.0), 0);
}
