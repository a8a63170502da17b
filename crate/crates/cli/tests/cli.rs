use std::fs;
use std::process::{Command, Output};

fn linnik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linnik")).args(args).output().expect("run linnik")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn evaluate_writes_schema() {
    let o = linnik(&["evaluate", "--N", "300", "--k", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,k,lhs,m1,m2,m3,m4,residual,normalized_residual,slope_na"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 10);
    assert_eq!(row[0], "300");
    assert_eq!(row[9], "NA");
    // 17 significant digits
    assert_eq!(row[2].split('e').next().unwrap().len(), 18);
}

#[test]
fn json_mirrors_csv() {
    let csv = stdout(&linnik(&["evaluate", "--N", "300", "--k", "2"]));
    let json = stdout(&linnik(&["evaluate", "--N", "300", "--k", "2", "--format", "json"]));
    let row = csv.lines().nth(1).unwrap().split(',').nth(2).unwrap().to_string();
    assert!(json.contains(&format!("\"lhs\": {row}")), "{json}");
    assert!(json.contains("\"slope_na\": null"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.csv"));
        let p = path.to_str().unwrap();
        let o = linnik(&["evaluate", "--N-list", "300,400", "--k", "2.5", "--out", p]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        files.push(fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(code(&linnik(&["evaluate", "--N", "300"])), 1);
    assert_eq!(code(&linnik(&["scan", "--N-list", "500"])), 1);
    assert_eq!(code(&linnik(&["evaluate", "--N", "300", "--N-list", "300,400", "--k", "2"])), 1);
    // data / validation
    let gate = linnik(&["evaluate", "--N", "200", "--k", "1.2"]);
    assert_eq!(code(&gate), 2);
    assert!(stderr(&gate).contains("3/2"));
    assert_eq!(code(&linnik(&["evaluate", "--N", "200", "--k", "1.2", "--allow-subcritical"])), 0);
    assert_eq!(code(&linnik(&["evaluate", "--N", "300", "--k", "2", "--zeros", "no-such-source"])), 2);
    // help is not an error
    assert_eq!(code(&linnik(&["--help"])), 0);
}

#[test]
fn zeros_commands() {
    let v = linnik(&["zeros", "validate", "bundled"]);
    assert_eq!(code(&v), 0);
    assert_eq!(stdout(&v).trim(), "OK, count=100");

    let info = stdout(&linnik(&["zeros", "info"]));
    let first = info
        .split_whitespace()
        .find_map(|f| f.strip_prefix("first_gamma="))
        .unwrap()
        .parse::<f64>()
        .unwrap();
    assert!(first > 14.0 && first < 14.3);
}

#[test]
fn corrupt_zero_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "14.134725\n21.022\n20.5\n").unwrap();
    let p = path.to_str().unwrap();

    let v = linnik(&["zeros", "validate", p]);
    assert_eq!(code(&v), 2);
    assert!(stderr(&v).contains("line 3"), "{}", stderr(&v));

    let st = linnik(&["selftest", "--zeros", p]);
    assert_eq!(code(&st), 2);
    assert!(stderr(&st).contains("zeros"));
}

#[test]
fn selftest_passes() {
    let o = linnik(&["selftest"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn probe_with_empty_zero_set() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    fs::write(&path, "# no zeros\n").unwrap();
    let o = linnik(&["probe", "--d", "2", "--k", "2", "--zeros", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    // summary on stderr, table on stdout
    assert!(stderr(&o).contains("ratio=NA"));
    assert_eq!(stdout(&o).trim(), "index,gamma,term,partial_sum");
}

#[test]
fn probe_partial_sums_increase() {
    let o = linnik(&["probe", "--d", "2", "--k", "2", "--Z", "20"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let sums: Vec<f64> = stdout(&o)
        .lines()
        .skip_while(|l| !l.starts_with("index"))
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(sums.len(), 20);
    assert!(sums.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn synthetic_scan_recovers_planted_slope() {
    let o = linnik(&["scan", "--synthetic"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o) + &stderr(&o);
    let slope: f64 = text
        .split_whitespace()
        .find_map(|f| f.strip_prefix("slope="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 3.0).abs() < 1e-9);
}

#[test]
fn scan_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let plot = dir.path().join("plot.csv");
    let o = linnik(&[
        "scan",
        "--N-list",
        "300,400,500",
        "--k",
        "2",
        "--out",
        out.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = fs::read_to_string(&out).unwrap();
    assert_eq!(rows.lines().count(), 4);
    // the fitted slope fills the last column
    assert!(rows.lines().skip(1).all(|l| !l.ends_with(",NA")));
    let plot = fs::read_to_string(&plot).unwrap();
    assert_eq!(plot.lines().next(), Some("log_N,log_abs_residual"));
    assert_eq!(plot.lines().count(), 4);
}

#[test]
fn bessel_debug_command() {
    let o = linnik(&["bessel", "--nu-re", "2", "--u", "10"]);
    assert_eq!(code(&o), 0);
    let re: f64 = stdout(&o)
        .split_whitespace()
        .find_map(|f| f.strip_prefix("re="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((re - 0.2546303136851206).abs() < 1e-12);
}
