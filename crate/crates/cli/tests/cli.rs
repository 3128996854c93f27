use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    dir: TempDir,
}

impl Run {
    fn new(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("run.cfg"), config).unwrap();
        Self { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn exec(&self, experiment: &str, sets: &[&str]) -> Output {
        self.exec_into(experiment, sets, "out")
    }

    fn exec_into(&self, experiment: &str, sets: &[&str], out: &str) -> Output {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_axda"));
        cmd.arg(experiment).arg("--config").arg(self.path("run.cfg")).arg("--out").arg(self.path(out));
        for s in sets {
            cmd.arg("--set").arg(s);
        }
        cmd.output().unwrap()
    }

    fn csv(&self, file: &str) -> (Vec<String>, Vec<Vec<String>>) {
        read_csv(&self.path("out").join(file))
    }
}

fn read_csv(p: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn column(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| num(&r[i])).collect()
}

fn ok(o: &Output) {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}

const SMALL: &[(&str, &[&str])] = &[
    ("bounds", &["d-list=1,100", "rho-grid=log:-3:0:5"]),
    ("gaussian", &["mc-draws=2000", "rho-grid=0,0.01,0.1"]),
    ("lasso", &["quad-n=20001", "plot-n=51"]),
    ("inpaint", &["height=8", "width=8", "iters=200", "burnin=50"]),
    ("logistic", &["n-list=1,10", "iters=400", "burnin=100"]),
    ("optimize", &["rho-schedule=1,0.3", "mcem-iters=5", "mcem-draws=10"]),
];

#[test]
fn outputs_are_byte_identical_for_equal_seeds() {
    let run = Run::new("seed = 7\n");
    for (exp, sets) in SMALL {
        ok(&run.exec_into(exp, sets, "a"));
        ok(&run.exec_into(exp, sets, "b"));
    }
    let mut names: Vec<_> = std::fs::read_dir(run.path("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 15);
    for n in names {
        let a = std::fs::read(run.path("a").join(&n)).unwrap();
        let b = std::fs::read(run.path("b").join(&n)).unwrap();
        assert!(a == b, "{n:?} differs");
    }
    // a different seed changes stochastic output
    ok(&run.exec_into("gaussian", &["mc-draws=2000", "rho-grid=0.1", "seed=8"], "c"));
    ok(&run.exec_into("gaussian", &["mc-draws=2000", "rho-grid=0.1"], "d"));
    assert_ne!(
        std::fs::read(run.path("c/gaussian_figure.csv")).unwrap(),
        std::fs::read(run.path("d/gaussian_figure.csv")).unwrap()
    );
}

#[test]
fn headers_and_number_format() {
    let run = Run::new("");
    let want: &[(&str, &str, &str)] = &[
        ("bounds", "bounds_curves.csv", "d,rho,thm1,cor1,thm2,cor2,wasserstein"),
        ("gaussian", "gaussian_figure.csv", "rho,w2_exact,w2_bound,tv_mc,tv_bound"),
        ("lasso", "lasso_potentials.csv", "rho,theta,g,g_rho,g_lower,g_upper,prior_rho,posterior_rho"),
        ("lasso", "lasso_credibility.csv", "rho,hpd_lo,hpd_hi,coverage,bound_lo,bound_hi,exact_hpd_lo,exact_hpd_hi"),
        ("inpaint", "inpaint_trace.csv", "iteration,potential"),
        ("inpaint", "inpaint_hpd.csv", "alpha,gamma_alpha"),
        ("inpaint", "inpaint_summary.csv", "pixels,observed,rel_error_observation,rel_error_mmse,min_ess,bias_reference"),
        ("logistic", "logistic_bound.csv", "n,rho,cor3_bound"),
        ("logistic", "logistic_chain.csv", "component,posterior_mean,posterior_variance,ess"),
        ("optimize", "optimize_penalty_trace.csv", "stage,rho,iteration,objective"),
        ("optimize", "optimize_theta.csv", "method,rho,iteration,theta_0,theta_1"),
    ];
    for (exp, sets) in SMALL {
        ok(&run.exec(exp, sets));
    }
    for (_, file, header) in want {
        let (h, rows) = run.csv(file);
        assert_eq!(h.join(","), *header);
        assert!(!rows.is_empty());
        for r in &rows {
            assert_eq!(r.len(), h.len(), "{file}");
        }
    }
    // floats carry 17 significant digits
    let (_, rows) = run.csv("bounds_curves.csv");
    let mantissa = rows[0][2].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{}", rows[0][2]);
}

#[test]
fn bounds_examples() {
    let run = Run::new("d-list = 1\nL = 1\n");
    ok(&run.exec("bounds", &["rho-grid=1e-3"]));
    let (_, rows) = run.csv("bounds_curves.csv");
    assert_eq!(rows.len(), 1);
    assert!((num(&rows[0][2]) / 1.5958e-3 - 1.0).abs() < 0.01);
    ok(&run.exec("bounds", &["rho-grid=1e-12", "d-list=1,10,100"]));
    let (_, rows) = run.csv("bounds_curves.csv");
    for r in &rows {
        assert!(r[2..].iter().all(|v| num(v) < 1e-9), "{r:?}");
    }
    ok(&run.exec("bounds", &[]));
    let (_, rows) = run.csv("bounds_curves.csv");
    assert_eq!(rows.len(), 50);
    let thm1 = column(&rows, 2);
    assert!(thm1.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn gaussian_rows_dominated_by_bounds() {
    let run = Run::new("mc-draws = 20000\n");
    ok(&run.exec("gaussian", &[]));
    let (_, rows) = run.csv("gaussian_figure.csv");
    assert!(rows[0].iter().all(|v| num(v) == 0.0));
    for r in &rows {
        let v: Vec<f64> = r.iter().map(|s| num(s)).collect();
        assert!(v[1] <= v[2]);
        // 3 standard errors of a mean of values in [0, 1]
        assert!(v[3] <= v[4] + 3.0 * (0.25f64 / 20_000.0).sqrt(), "{v:?}");
    }
}

#[test]
fn lasso_sandwich_and_table() {
    let run = Run::new("");
    ok(&run.exec("lasso", &[]));
    let (_, rows) = run.csv("lasso_potentials.csv");
    assert_eq!(rows.len(), 3 * 601);
    for r in &rows {
        let v: Vec<f64> = r.iter().map(|s| num(s)).collect();
        // the upper bound is attained at θ = 0
        assert!(v[4] <= v[3] + 1e-12 && v[3] <= v[5] + 1e-12, "{v:?}");
    }
    let (_, tab) = run.csv("lasso_credibility.csv");
    assert_eq!(tab.len(), 4);
    let r = &tab[1];
    assert!((num(&r[1]) + 0.47).abs() <= 0.01 && (num(&r[2]) - 1.24).abs() <= 0.01);
    assert!((num(&r[3]) - 0.95).abs() <= 0.005);
}

fn write_pgm(path: &Path, h: usize, w: usize) {
    let mut bytes = format!("P5\n{w} {h}\n255\n").into_bytes();
    bytes.extend((0..h * w).map(|i| if (i / w + i % w) % 5 < 2 { 200u8 } else { 30 }));
    std::fs::write(path, bytes).unwrap();
}

#[test]
fn inpaint_outputs_and_input_formats() {
    let run = Run::new("iters = 300\nburnin = 100\n");
    write_pgm(&run.path("img.pgm"), 6, 9);
    let input = format!("input={}", run.path("img.pgm").display());
    ok(&run.exec("inpaint", &[&input]));
    for name in ["observation", "mmse", "bias"] {
        let bytes = std::fs::read(run.path("out").join(format!("inpaint_{name}.pgm"))).unwrap();
        assert!(bytes.starts_with(b"P5\n9 6\n255\n"));
        assert_eq!(bytes.len(), "P5\n9 6\n255\n".len() + 54);
    }
    let (_, s) = run.csv("inpaint_summary.csv");
    assert_eq!(s[0][0], "54");
    assert_eq!(s[0][5], "dense_oracle");
    let (_, trace) = run.csv("inpaint_trace.csv");
    assert_eq!(trace.len(), 300);
    let (_, hpd) = run.csv("inpaint_hpd.csv");
    let g = column(&hpd, 1);
    assert!(g.windows(2).all(|w| w[1] <= w[0]));
    let (_, img) = run.csv("inpaint_mmse.csv");
    assert_eq!((img.len(), img[0].len()), (6, 9));

    std::fs::write(run.path("bad.png"), b"\x89PNG\r\n\x1a\n").unwrap();
    let bad = format!("input={}", run.path("bad.png").display());
    assert_eq!(run.exec("inpaint", &[&bad]).status.code(), Some(2));
}

#[test]
fn inpaint_mmse_beats_observation() {
    let run = Run::new("iters = 2000\nburnin = 500\n");
    ok(&run.exec("inpaint", &[]));
    let (_, s) = run.csv("inpaint_summary.csv");
    assert_eq!(s[0][0], "1024");
    assert_eq!(s[0][5], "input");
    assert!(num(&s[0][3]) < num(&s[0][2]), "{:?}", s[0]);
}

#[test]
fn logistic_bound_grows_with_n() {
    let run = Run::new("iters = 2000\nburnin = 500\n");
    ok(&run.exec("logistic", &["n-list=1,10,100", "rho-grid=1e-5"]));
    let (_, rows) = run.csv("logistic_bound.csv");
    let b = column(&rows, 2);
    assert!(b[0] < b[1] && b[1] < b[2]);
    let (_, chain) = run.csv("logistic_chain.csv");
    assert_eq!(chain.len(), 2);
    assert!(column(&chain, 3).iter().all(|&e| e > 1.0));
}

#[test]
fn optimize_traces() {
    let run = Run::new("problem = lasso\n");
    ok(&run.exec("optimize", &["rho-schedule=1,0.1,0.01", "max-outer=5000"]));
    let (_, trace) = run.csv("optimize_penalty_trace.csv");
    for w in trace.windows(2) {
        if w[0][0] == w[1][0] {
            assert!(num(&w[1][3]) <= num(&w[0][3]));
        }
    }
    let (_, th) = run.csv("optimize_theta.csv");
    let last_penalty = th.iter().rfind(|r| r[0] == "penalty").unwrap();
    assert!((num(&last_penalty[3]) - 0.25).abs() < 1e-2);
    assert_eq!(th.iter().filter(|r| r[0] == "mcem").count(), 101);
}

#[test]
fn exit_codes() {
    let run = Run::new("seed = 1\n");
    assert_eq!(run.exec("nonsense", &[]).status.code(), Some(2));
    assert_eq!(run.exec("bounds", &["bogus=1"]).status.code(), Some(2));
    assert_eq!(run.exec("bounds", &["rho-grid=-1"]).status.code(), Some(2));
    assert_eq!(run.exec("bounds", &["L=abc"]).status.code(), Some(2));
    assert_eq!(run.exec("bounds", &["noequals"]).status.code(), Some(2));
    assert_eq!(run.exec("lasso", &["plot-rhos=0"]).status.code(), Some(2));
    let bad_file = Run::new("unknown-key = 3\n");
    let o = bad_file.exec("bounds", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown-key"));
    // a covariance that is not positive definite is a numeric failure
    assert_eq!(run.exec("gaussian", &["nugget=-10", "mc-draws=10"]).status.code(), Some(3));
    let missing = Command::new(env!("CARGO_BIN_EXE_axda"))
        .args(["bounds", "--config", "/nonexistent/cfg", "--out"])
        .arg(run.path("out"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let no_args = Command::new(env!("CARGO_BIN_EXE_axda")).arg("bounds").output().unwrap();
    assert_eq!(no_args.status.code(), Some(2));
}
