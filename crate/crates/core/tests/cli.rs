use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_dwork-hg");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("DWORK_HG_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn eval_dwork_prints_residue() {
    let o = run(&[
        "eval", "dwork", "--p", "5", "--a", "1/2", "--d", "1", "--prec", "2", "--point", "teich:2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "13");

    let o = run(&[
        "eval",
        "dwork",
        "--p",
        "7",
        "--a",
        "1/3",
        "--d",
        "2",
        "--prec",
        "3",
        "--point",
        "teich:324",
    ]);
    assert_eq!(stdout(&o), "94");
}

#[test]
fn eval_dwork_outside_domain_exits_1() {
    // teich(3) is a zero of h for a = 1/3, d = 2, p = 7
    let o = run(&[
        "eval", "dwork", "--p", "7", "--a", "1/3", "--d", "2", "--prec", "1", "--point", "teich:3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the domain"));

    let o = run(&[
        "eval", "dwork", "--p", "5", "--a", "1/2", "--d", "1", "--point", "teich:0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "eval", "dwork", "--p", "5", "--a", "1/5", "--d", "1", "--point", "teich:1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_usage_errors_exit_2() {
    for args in [
        vec![
            "eval", "dwork", "--p", "5", "--a", "1/2", "--d", "1", "--point", "2",
        ],
        vec![
            "eval", "dwork", "--p", "5", "--a", "half", "--d", "1", "--point", "teich:2",
        ],
        vec![
            "eval", "dwork", "--p", "5", "--a", "1/2", "--point", "teich:2",
        ],
        vec!["eval", "ffhg", "--q", "3", "--alpha", "1", "1", "--t", "2"],
        vec!["eval", "ffhg", "--q", "3", "--alpha", "1", "--t", "7"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn eval_ffhg_prints_complex_pair() {
    let o = run(&["eval", "ffhg", "--q", "3", "--alpha", "1", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1.00000000000e0,0.00000000000e0");
    let o = run(&["eval", "ffhg", "--q", "3", "--alpha", "-1", "--t", "1"]);
    assert_eq!(stdout(&o), "0.00000000000e0,0.00000000000e0");
}

#[test]
fn verify_writes_report_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    fs::write(
        &config,
        "[[case]]\nkind = \"theorem\"\np = 2\nN = 3\nr = 2\nd = [1, 2]\nn = 2\n\n[[case]]\nkind = \"gs-identity\"\nq = 4\n",
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["summary"]["pass"], true);
    assert_eq!(doc["cases"][1]["predicted_sign"], -1);
    assert_eq!(doc["cases"][1]["observed_sign"], "-1");

    let csv = dir.path().join("r.csv");
    let o = run(&[
        "report",
        "--input",
        out.to_str().unwrap(),
        "--format",
        "csv",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("case_id,kind,p,N,r,d,f,n,point,lhs,rhs,match,skipped_reason\n"));
}

#[test]
fn malformed_config_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    let out = dir.path().join("r.json");
    for text in [
        "[[case]]\nkind = \"theorem\"\np = 6\nN = 5\nd = 1\n",
        "[[case]]\nkind = \"corollary\"\np = 3\nf = 2\na = [\"1/2\"]\nd = 1\nfield_degree = 2\n",
        "[[case]]\nkind = \"theorem\"\np = 5\nN = 2\nd = 1\nfield_degree = 40\n",
        "[[case\nkind = 1",
        "wat = 3\n",
    ] {
        fs::write(&config, text).unwrap();
        let o = run(&[
            "verify",
            "--config",
            config.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(!out.exists());
    }
    let o = run(&[
        "verify",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_dir_override_applies_to_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    fs::write(
        &config,
        "output = \"gs.json\"\n[[case]]\nkind = \"gs-identity\"\nq = [3, 5]\n",
    )
    .unwrap();
    let o = Command::new(BIN)
        .args(["verify", "--config", config.to_str().unwrap()])
        .env("DWORK_HG_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("gs.json").exists());
}

#[test]
fn report_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    fs::write(
        &config,
        "seed = 11\n[[case]]\nkind = \"theorem\"\np = [3, 5]\nN = [2, 4]\nd = [1, 2]\nn = 2\n\n\
         [[case]]\nkind = \"finite-general\"\nq = [7, 9]\nd = 1\nsamples = 25\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("r{threads}.json"));
        let o = run(&[
            "verify",
            "--config",
            config.to_str().unwrap(),
            "--threads",
            threads,
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push(fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
