use bbpgmo::Algorithm;
use bbpgmo_bench::config::ConfigFile;
use bbpgmo_bench::spec::{parse_algos, AlgoKind, AlgoSpec, ExperimentSpec, ProblemSpec};

#[test]
fn quadratic_spec_round_trips() {
    let p: ProblemSpec = "quadratic:n=10,xl=-2,xu=2".parse().unwrap();
    assert_eq!(
        p,
        ProblemSpec::Quadratic {
            n: 10,
            lower: -2.0,
            upper: 2.0,
            seed: None
        }
    );
    let q: ProblemSpec = p.to_string().parse().unwrap();
    assert_eq!(p, q);
    let s: ProblemSpec = "quadratic:n=3,xl=-1,xu=1,seed=7".parse().unwrap();
    assert_eq!(s.to_string().parse::<ProblemSpec>().unwrap(), s);
}

#[test]
fn bad_problem_specs_are_rejected() {
    for bad in [
        "quadratic",
        "quadratic:n=0,xl=-1,xu=1",
        "quadratic:n=2,xl=1,xu=-1",
        "quadratic:n=2,xl=a,xu=1",
    ] {
        let r = bad
            .parse::<ProblemSpec>()
            .and_then(|p| p.build(0).map(|_| ()));
        assert!(r.is_err(), "{bad}");
    }
    let err = "NOPE".parse::<ProblemSpec>().unwrap().build(0).unwrap_err();
    assert!(err.to_string().contains("NOPE"));
}

#[test]
fn algorithm_list_keeps_parameters_together() {
    let algos = parse_algos("bbpgmo, abbpgmo:tau=3,pgmo_ls:ell=50 ,pgmo_L,pgmo_mu,pgmo").unwrap();
    let kinds: Vec<&AlgoKind> = algos.iter().map(|a| &a.kind).collect();
    assert_eq!(
        kinds,
        [
            &AlgoKind::Bbpgmo,
            &AlgoKind::Abbpgmo { tau: 3.0 },
            &AlgoKind::PgmoLs { ell: Some(50.0) },
            &AlgoKind::PgmoL,
            &AlgoKind::PgmoMu,
            &AlgoKind::PgmoLs { ell: None },
        ]
    );
    assert_eq!(algos[1].label, "abbpgmo:tau=3");
    assert_eq!(
        "abbpgmo".parse::<AlgoSpec>().unwrap().kind,
        AlgoKind::Abbpgmo { tau: 2.0 }
    );
}

#[test]
fn bad_algorithms_are_rejected() {
    for bad in ["newton", "bbpgmo:tau=2", "pgmo_ls:ell=x", "abbpgmo:foo=1"] {
        assert!(bad.parse::<AlgoSpec>().is_err(), "{bad}");
    }
}

#[test]
fn ell_defaults_to_largest_lipschitz_constant() {
    let problem = ProblemSpec::Named("JOS1a".into()).build(0).unwrap();
    let l_max = problem.lipschitz_max().unwrap();
    let a: AlgoSpec = "pgmo_ls".parse().unwrap();
    assert_eq!(
        a.resolve(&problem).unwrap(),
        Algorithm::PgmoLineSearch { ell: l_max }
    );
}

#[test]
fn experiment_validation() {
    let base = ExperimentSpec::new("BK1".parse().unwrap(), parse_algos("bbpgmo").unwrap());
    assert!(base.validate().is_ok());
    let mut s = base.clone();
    s.trials = 0;
    assert!(s.validate().is_err());
    let mut s = base.clone();
    s.jobs = Some(0);
    assert!(s.validate().is_err());
    let mut s = base;
    s.d_tol = f64::NAN;
    assert!(s.validate().is_err());
}

#[test]
fn config_file_parsing() {
    let c = ConfigFile::parse("# campaign\nproblem = BK1\nd_tol = 1e-8 # tighter\n\ntrials=3\n")
        .unwrap();
    assert_eq!(c.get("problem"), Some("BK1"));
    assert_eq!(c.parsed::<f64>("d-tol").unwrap(), Some(1e-8));
    assert_eq!(c.parsed::<usize>("trials").unwrap(), Some(3));
    assert_eq!(c.parsed::<u64>("seed").unwrap(), None);

    assert!(ConfigFile::parse("colour = red").is_err());
    assert!(ConfigFile::parse("seed = 1\nseed = 2").is_err());
    assert!(ConfigFile::parse("just words").is_err());
    let c = ConfigFile::parse("trials = many").unwrap();
    assert!(c
        .parsed::<usize>("trials")
        .unwrap_err()
        .to_string()
        .contains("trials"));
}

#[test]
fn config_file_load_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert!(format!("{:#}", ConfigFile::load(&missing).unwrap_err()).contains("missing.cfg"));
    let path = dir.path().join("c.cfg");
    std::fs::write(&path, "problem = FDS\n").unwrap();
    assert_eq!(ConfigFile::load(&path).unwrap().get("problem"), Some("FDS"));
}

#[test]
fn ell_without_lipschitz_constants() {
    let problem = ProblemSpec::Named("FF1".into()).build(0).unwrap();
    assert!(problem.lipschitz_max().is_none());
    let ls: AlgoSpec = "pgmo_ls".parse().unwrap();
    assert_eq!(
        ls.resolve(&problem).unwrap(),
        Algorithm::PgmoLineSearch { ell: 1.0 }
    );
    let fixed: AlgoSpec = "pgmo_fixed".parse().unwrap();
    assert!(fixed.resolve(&problem).is_err());
    let given: AlgoSpec = "pgmo_fixed:ell=4".parse().unwrap();
    assert_eq!(
        given.resolve(&problem).unwrap(),
        Algorithm::PgmoFixed { ell: 4.0 }
    );
}
