use assert_cmd::Command;
use serde_json::Value;

fn recrel() -> Command {
    Command::cargo_bin("recrel").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = recrel().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(j).unwrap().parse().unwrap()).collect()
}

#[test]
fn exact_coefficients() {
    let v = json(&["exact", "--family", "k4ladder", "--n", "1", "--emit", "coeffs"]);
    assert_eq!(v["results"][0]["coeffs"], serde_json::json!(["0", "1", "2", "0", "-7", "7", "-2"]));
    assert!(
        stdout(&["exact", "--family", "k4ladder", "--n", "1", "--emit", "coeffs"]).contains("0, 1, 2, 0, -7, 7, -2")
    );
    let v = json(&["exact", "--family", "street3xn", "--n", "0", "--emit", "coeffs"]);
    assert_eq!(v["results"][0]["coeffs"], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn exact_values() {
    let v = json(&["exact", "--family", "series", "--n", "2", "--p", "1/2"]);
    assert_eq!(v["results"][0]["reliability"], "1/4");
    // decimals are read exactly
    let v = json(&["exact", "--family", "parallel", "--n", "2", "--p", "0.1"]);
    assert_eq!(v["results"][0]["p"], "1/10");
    assert_eq!(v["results"][0]["reliability"], "19/100");
    let v = json(&["exact", "--family", "fan", "--n", "3", "--grid", "4"]);
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    assert_eq!(v["results"][4]["reliability"], "1");
}

#[test]
fn moments_examples() {
    let v = json(&["moments", "--family", "parallel", "--n", "3", "--m", "1", "--lambda", "1"]);
    assert_eq!(v["results"][0]["scaled_exact"], "11/6");
    assert!((v["results"][0]["value"].as_f64().unwrap() - 1.833333).abs() < 1e-6);
    let v = json(&["moments", "--family", "kofn", "--k", "2", "--n", "3", "--cumulants", "--m", "2"]);
    assert_eq!(v["results"][0]["scaled_exact"], "13/36");
    let v = json(&["moments", "--family", "k4ladder", "--n", "1", "--m", "1"]);
    assert_eq!(v["results"][0]["scaled_exact"], "79/60");
}

#[test]
fn lambda_rescales() {
    let v = json(&["moments", "--family", "parallel", "--n", "3", "--m", "2", "--lambda", "2"]);
    let scaled: f64 = {
        let s = v["results"][0]["scaled_exact"].as_str().unwrap();
        let (a, b) = s.split_once('/').unwrap();
        a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap()
    };
    assert!((v["results"][0]["value"].as_f64().unwrap() - scaled / 4.0).abs() < 1e-15);
}

#[test]
fn signature_example() {
    let v = json(&["signature", "--family", "street3xn", "--order", "8"]);
    let r = &v["results"][0];
    assert_eq!(r["i"], 3);
    for (j, c) in [("3", "1"), ("4", "4"), ("5", "4")] {
        assert_eq!(r["alpha"][j], c);
    }
    assert_eq!(r["alpha_prime"]["1"], "0");
    assert_eq!(r["alpha_prime"]["2"], "-2");
    let from_sizes = json(&["signature", "--family", "street3xn", "--order", "8", "--sizes", "20,21,22"]);
    assert_eq!(from_sizes["results"], v["results"]);
}

#[test]
fn asympt_double_fan() {
    let v = json(&["asympt", "--family", "doublefan", "--n", "50", "--terms", "3"]);
    let n: f64 = 50.0;
    let euler = 0.577_215_664_901_532_9;
    let expected = (n.ln() + euler) / 2.0 + std::f64::consts::PI.sqrt() / (2.0 * n.sqrt()) - 11.0 / (4.0 * n);
    assert!((v["results"][0]["estimate"].as_f64().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn simulate_brackets_exact_and_is_reproducible() {
    let args = ["simulate", "--family", "fan", "--n", "10", "--samples", "100000", "--seed", "7", "--m", "1,2"];
    let v = json(&args);
    for r in v["results"].as_array().unwrap() {
        let (mean, se, exact) =
            (r["mean"].as_f64().unwrap(), r["std_error"].as_f64().unwrap(), r["exact"].as_f64().unwrap());
        assert!((mean - exact).abs() <= 4.0 * se, "{r}");
        assert_eq!(r["seed"], 7);
    }
    let one = stdout(&[&args[..], &["--threads", "1"]].concat());
    let four = stdout(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn compare_k4_error_decreases() {
    let text = stdout(&["compare", "--family", "k4ladder", "--n", "2..100", "--terms", "3", "--format", "csv"]);
    let rel = csv_column(&text, "rel_err");
    assert_eq!(rel.len(), 99);
    assert!(rel.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn compare_double_fan_error_decreases() {
    let text = stdout(&["compare", "--family", "doublefan", "--n", "2..100", "--terms", "3", "--format", "csv"]);
    let abs = csv_column(&text, "abs_err");
    assert!(abs[20..].windows(2).all(|w| w[1] < w[0]));
    assert!(abs[98] < 0.01);
}

#[test]
fn compare_street_weibull() {
    let v = json(&["compare", "--family", "street3xn", "--n", "30", "--weibull", "1"]);
    let max = v["summary"]["max_abs_err"].as_f64().unwrap();
    assert!(max < 0.07, "{max}");
    let rows = v["results"].as_array().unwrap();
    let worst = rows.iter().map(|r| r["abs_err"].as_f64().unwrap()).fold(0.0, f64::max);
    assert_eq!(worst, max);
}

#[test]
fn classify_all() {
    let v = json(&["classify"]);
    let regimes: Vec<(String, String)> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["family"].as_str().unwrap().to_string(), r["regime"].as_str().unwrap().to_string()))
        .collect();
    assert!(regimes.contains(&("fan".into(), "saturating".into())));
    assert!(regimes.contains(&("doublefan".into(), "parallel-like".into())));
    assert!(regimes.contains(&("street3xn".into(), "series-like".into())));
}

#[test]
fn json_echoes_config() {
    let v = json(&["moments", "--family", "k4ladder", "--n", "2..3", "--m", "1,2"]);
    assert_eq!(v["config"]["command"]["command"], "moments");
    assert_eq!(v["config"]["command"]["arch"]["family"], "k4ladder");
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["exact", "--family", "nope", "--n", "1"],
        vec!["exact", "--family", "kofn", "--n", "3"],
        vec!["exact", "--family", "fan", "--n", "2", "--p", "3/2"],
        vec!["exact", "--family", "series", "--n", "0"],
        vec!["moments", "--family", "series", "--n", "2", "--m", "0"],
        vec!["exact"],
    ] {
        recrel().args(&args).assert().code(2);
    }
}

#[test]
fn computation_errors_exit_3_with_name() {
    let out = recrel().args(["moments", "--family", "k4ladder", "--n", "3", "--mgf", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DivergentMGF"));
    let out = recrel().args(["simulate", "--family", "kofn", "--k", "2", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NoGraphRealization"));
}

#[test]
fn output_directory_from_environment() {
    let dir = std::env::temp_dir().join(format!("recrel-cli-test-{}", std::process::id()));
    recrel()
        .env("RECREL_OUT_DIR", &dir)
        .args(["exact", "--family", "series", "--n", "3", "--format", "csv", "--output", "sub/series.csv"])
        .assert()
        .success();
    let text = std::fs::read_to_string(dir.join("sub/series.csv")).unwrap();
    assert_eq!(text, "n,coeffs\n3,\"0, 0, 0, 1\"\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn help_documents_equations() {
    for (cmd, needle) in [
        ("exact", "R_n(p) = sum_k c_k p^k"),
        ("moments", "m! sum_k c_k / k^m"),
        ("signature", "-ln zeta_+"),
        ("asympt", "eta = (alpha_i n)^(-1/i)"),
        ("simulate", "bottleneck"),
        ("compare", "Weibull equivalent"),
        ("classify", "R_n(1/2)"),
    ] {
        let text = stdout(&[cmd, "--help"]);
        assert!(text.contains(needle), "{cmd}");
    }
}
