use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const K7: &str = "7 bcdefg,agdfec,abegfd,acfbge,adgcbf,aebdcg,afcedb\n";

fn tpm(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tpm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn tpm");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn catalog() -> String {
    stdout(&tpm(&["catalog", "print"], ""))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tpm-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_catalog_at_diminimal_level() {
    let out = tpm(&["verify", "--level", "diminimal"], &catalog());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 56);
    assert!(text.lines().all(|l| l.split(' ').nth(1) == Some("PASS")));
}

#[test]
fn verify_reports_failures_and_parse_errors() {
    let out = tpm(&["verify"], "3 bc,ac,ab\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("1 FAIL"));
    let out = tpm(&["verify"], "7 bcdefg,agdfec\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(tpm(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(tpm(&["moves", "--apply", "remove", "--edge", "bf"], K7).status.code(), Some(2));
}

#[test]
fn dual_pipeline_is_an_involution() {
    let once = stdout(&tpm(&["dual"], K7));
    let twice = stdout(&tpm(&["dual"], &once));
    let canon_twice = stdout(&tpm(&["canon"], &twice));
    let canon = stdout(&tpm(&["canon"], K7));
    assert_eq!(canon_twice, canon);
    assert_eq!(once.split(' ').next(), Some("14"));
}

#[test]
fn canon_dedup_drops_isomorphic_maps() {
    let mirrored = "7 gfedcb,cefdga,dfgeba,egbfca,fbcgda,gcdbea,bdecfa\n";
    let input = format!("{K7}{mirrored}");
    assert_eq!(stdout(&tpm(&["canon"], &input)).lines().count(), 2);
    assert_eq!(stdout(&tpm(&["canon", "--dedup"], &input)).lines().count(), 1);
}

#[test]
fn moves_on_k7() {
    let out = tpm(&["moves"], K7);
    assert_eq!(stdout(&out).trim(), "1 OK removable: - shrinkable: -");
    let out = tpm(&["moves", "--apply", "remove", "--edge", "a,b"], K7);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("improper-meeting"));
}

#[test]
fn stats_and_reduce() {
    let text = stdout(&tpm(&["stats"], K7));
    assert_eq!(text.trim(), "1 OK n=7 e=21 f=14 genus=1 degrees=6,6,6,6,6,6,6 faces=3,3,3,3,3,3,3,3,3,3,3,3,3,3");
    let canon = stdout(&tpm(&["canon"], K7));
    assert_eq!(stdout(&tpm(&["reduce", "--all"], K7)), canon);
}

#[test]
fn generate_eight_diminimal_matches_catalog() {
    let out = tpm(&["generate", "8", "--diminimal-only", "--jobs", "1"], "");
    assert_eq!(out.status.code(), Some(0));
    let generated: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(generated.len(), 2);
    let eights: String = catalog().lines().filter(|l| l.starts_with("8 ")).map(|l| format!("{l}\n")).collect();
    let mut expected: Vec<String> = stdout(&tpm(&["canon"], &eights)).lines().map(String::from).collect();
    expected.sort();
    assert_eq!(generated, expected);
}

#[test]
fn generate_resume_skips_finished_graphs() {
    let dir = scratch("resume");
    let checkpoint = dir.join("done.txt");
    let cp = checkpoint.to_str().unwrap();
    let first = stdout(&tpm(&["generate", "7", "--resume", cp], ""));
    assert_eq!(first.lines().count(), 1);
    let finished = std::fs::read_to_string(&checkpoint).unwrap().lines().count();
    assert!(finished > 100);
    let again = stdout(&tpm(&["generate", "7", "--resume", cp], ""));
    assert_eq!(again, first);
    assert_eq!(std::fs::read_to_string(&checkpoint).unwrap().lines().count(), finished);
}

#[test]
fn render_writes_svg_files() {
    let dir = scratch("render");
    let out = tpm(&["render", "--dual", "--out", dir.to_str().unwrap()], K7);
    assert_eq!(out.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
    let svg = std::fs::read_to_string(files[0].as_ref().unwrap().path()).unwrap();
    assert!(svg.contains("<svg"));
    assert_eq!(svg.matches(r#"class="vertex""#).count(), 7);
    assert_eq!(svg.matches(r#"class="face""#).count(), 14);
}

#[test]
fn catalog_verify_passes() {
    let out = tpm(&["catalog", "verify"], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("PASS"));
}
