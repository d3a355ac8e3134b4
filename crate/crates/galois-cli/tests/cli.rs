use std::path::PathBuf;
use std::process::Command;

use galois_cli::input::{parse_curve, parse_group_data, CurveJson, InputError};
use galois_cli::pipeline::{proposition, run_pipeline, CertificateError, PipelineOptions};
use galois_cli::report::PipelineReport;
use galois_cli::{load_curve, svg};

fn curves() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../curves")
}

fn curve(name: &str) -> galois_core::curve::CurveSpec {
    load_curve(&curves().join(format!("{name}.json"))).unwrap()
}

fn galois(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_galois")).args(args).env("GALOIS_THREADS", "2").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn load_examples() {
    let c = curve("conic");
    assert_eq!((c.degree(), c.num_components()), (2, 1));
    let c = curve("two_conics");
    assert_eq!((c.degree(), c.num_components()), (4, 2));
    let c = curve("conic_line");
    assert!(c.is_line(1));
    let c = curve("gaussian_conic");
    assert_eq!(c.degree(), 2);
}

#[test]
fn load_errors_have_distinct_codes() {
    let malformed = parse_curve("{\"degree_total\": 2, \"factors\": [").unwrap_err();
    let inhomogeneous = parse_curve(r#"{"degree_total":2,"factors":[{"degree":2,"terms":[{"exps":[1,0,0],"coeff":{"num":"1"}}]}]}"#).unwrap_err();
    let square = parse_curve(r#"{"degree_total":2,"factors":[{"degree":2,"terms":[{"exps":[2,0,0],"coeff":{"num":"1"}}]}]}"#).unwrap_err();
    let repeated = parse_curve(
        r#"{"degree_total":2,"factors":[{"degree":1,"terms":[{"exps":[1,0,0],"coeff":{"num":"1"}}]},{"degree":1,"terms":[{"exps":[1,0,0],"coeff":{"num":"2"}}]}]}"#,
    )
    .unwrap_err();
    let mismatch = parse_curve(r#"{"degree_total":3,"factors":[{"degree":2,"terms":[{"exps":[1,0,1],"coeff":{"num":"1"}},{"exps":[0,2,0],"coeff":{"num":"-1"}}]}]}"#).unwrap_err();
    let bad_coeff = parse_curve(r#"{"degree_total":1,"factors":[{"degree":1,"terms":[{"exps":[1,0,0],"coeff":{"num":"1","den":"0"}}]}]}"#).unwrap_err();
    assert!(matches!(malformed, InputError::Json(_)));
    assert!(matches!(inhomogeneous, InputError::NonHomogeneous { .. }));
    assert!(matches!(square, InputError::NonReduced), "{square}");
    assert!(matches!(repeated, InputError::NonReduced), "{repeated}");
    assert!(matches!(mismatch, InputError::DegreeTotal { declared: 3, actual: 2 }));
    assert!(matches!(bad_coeff, InputError::Coefficient { .. }));
    let codes: Vec<&str> = [&malformed, &inhomogeneous, &square, &mismatch, &bad_coeff].iter().map(|e| e.code()).collect();
    let mut uniq = codes.clone();
    uniq.sort();
    uniq.dedup();
    assert_eq!(uniq.len(), codes.len());
}

#[test]
fn curve_json_round_trip() {
    for name in ["conic", "two_conics", "gaussian_conic", "ramphoid_quintic"] {
        let c = curve(name);
        let j = CurveJson::from_curve(&c);
        let again = parse_curve(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(again, c);
    }
}

#[test]
fn report_round_trip_and_svg() {
    let run = run_pipeline(&curve("two_conics"), &PipelineOptions { seed: 5, ..PipelineOptions::default() }).unwrap();
    let text = run.report.to_json();
    assert!(text.contains("\"schema_version\""));
    let back = PipelineReport::from_json(&text).unwrap();
    assert_eq!(back, run.report);
    assert_eq!(back.to_json(), text);
    let plot = svg::render(&run.report);
    assert_eq!(plot.matches("<circle").count(), run.report.branch_points.len());
    assert!(!plot.contains("<script"));
}

#[test]
fn thread_count_does_not_change_reports() {
    let c = curve("fermat_cubic");
    let one = run_pipeline(&c, &PipelineOptions { seed: 3, threads: 1, ..PipelineOptions::default() }).unwrap();
    let many = run_pipeline(&c, &PipelineOptions { seed: 3, threads: 4, ..PipelineOptions::default() }).unwrap();
    assert_eq!(one.report.to_json(), many.report.to_json());
}

#[test]
fn certificate_errors() {
    let run = run_pipeline(&curve("conic_line"), &PipelineOptions::default()).unwrap();
    let comps = run.report.sheet_components.clone();
    let line = comps.iter().position(|&c| c == 2).unwrap() + 1;
    let conic: Vec<usize> = (1..=3).filter(|&i| i != line).collect();
    assert_eq!(run.certificate(1, 1).unwrap_err(), CertificateError::SameSheet);
    assert_eq!(run.certificate(1, 9).unwrap_err(), CertificateError::OutOfRange(9, 3));
    assert_eq!(run.certificate(conic[0], line).unwrap_err(), CertificateError::CrossComponent(conic[0], line));
    let cert = run.certificate(conic[0], conic[1]).unwrap();
    assert!(cert.validated);
    let mut expected: Vec<usize> = (1..=3).collect();
    expected.swap(conic[0] - 1, conic[1] - 1);
    assert_eq!(cert.permutation, expected);
}

#[test]
fn group_data_checks() {
    let g = std::fs::read_to_string(curves().join("groups/s4_s2_generators.json")).unwrap();
    let p = std::fs::read_to_string(curves().join("groups/s4_s2_partitions.json")).unwrap();
    let data = parse_group_data(&g, &p).unwrap();
    let rep = proposition(&data.generators, &data.families, data.candidate.as_ref()).unwrap();
    assert!(rep.hypotheses_hold && rep.conclusion_holds && rep.passes);
    assert_eq!(rep.order_g, "48");

    let g = std::fs::read_to_string(curves().join("groups/klein_generators.json")).unwrap();
    let p = std::fs::read_to_string(curves().join("groups/klein_partitions.json")).unwrap();
    let data = parse_group_data(&g, &p).unwrap();
    let rep = proposition(&data.generators, &data.families, data.candidate.as_ref()).unwrap();
    assert!(!rep.hypotheses_hold && rep.passes);

    assert!(matches!(parse_group_data("[[1,1]]", "{}"), Err(InputError::Group(_))));
    assert!(matches!(parse_group_data("[[2,1],[1,2,3]]", "{}"), Err(InputError::Group(_))));
}

#[test]
fn binary_exit_codes() {
    let dir = curves();
    let c = |n: &str| dir.join(format!("{n}.json")).display().to_string();
    let tmp = std::env::temp_dir().join(format!("galois-cli-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let out = tmp.join("r.json").display().to_string();
    let plot = tmp.join("r.svg").display().to_string();

    let (code, _, err) = galois(&["compute", "--curve", &c("conic"), "--seed", "2", "--tol", "1e-10", "--out", &out, "--svg", &plot]);
    assert_eq!(code, 0, "{err}");
    let rep = PipelineReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep.group.order, "2");
    assert_eq!(std::fs::read_to_string(&plot).unwrap().matches("<circle").count(), 2);

    let (code, _, err) = galois(&["compute", "--curve", &dir.join("missing.json").display().to_string()]);
    assert_eq!(code, 1);
    assert!(err.contains("[io]"), "{err}");

    let (code, stdout, _) = galois(&["transpose", "--curve", &c("conic"), "--i", "1", "--j", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"validated\": true"));
    let (code, _, err) = galois(&["transpose", "--curve", &c("two_conics"), "--i", "1", "--j", "2", "--seed", "5"]);
    let rep = run_pipeline(&curve("two_conics"), &PipelineOptions { seed: 5, ..PipelineOptions::default() }).unwrap().report;
    let expected = if rep.sheet_components[0] == rep.sheet_components[1] { 0 } else { 2 };
    assert_eq!(code, expected, "{err}");
    if expected == 2 {
        assert!(err.contains("different components"));
    }
    let (code, _, _) = galois(&["transpose", "--curve", &c("conic"), "--i", "1", "--j", "1"]);
    assert_eq!(code, 1);

    let (code, stdout, _) = galois(&["local", "--curve", &c("cuspidal_cubic")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["singular_points"].as_array().unwrap().len(), 1);
    let (code, stdout, _) = galois(&["local", "--curve", &c("cuspidal_cubic"), "--point", "0,0,1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!((v["branches"][0]["r"].as_u64(), v["branches"][0]["s"].as_u64()), (Some(2), Some(3)));
    let (code, _, _) = galois(&["local", "--curve", &c("cuspidal_cubic"), "--point", "1,2,1"]);
    assert_eq!(code, 1);

    let g = |n: &str| dir.join(format!("groups/{n}.json")).display().to_string();
    let (code, _, _) = galois(&["check-group", "--generators", &g("s4_s2_generators"), "--partitions", &g("s4_s2_partitions")]);
    assert_eq!(code, 0);
    // the candidate {1,2},{3,4} does not describe ⟨(12)(34)⟩
    let gens = tmp.join("g.json");
    std::fs::write(&gens, "[[2,1,4,3]]").unwrap();
    let parts = tmp.join("p.json");
    std::fs::write(&parts, r#"{"families":[[[[1,2],[3],[4]],[[1],[2],[3,4]]]],"candidate":[[1,2],[3,4]]}"#).unwrap();
    let (code, _, _) = galois(&["check-group", "--generators", &gens.display().to_string(), "--partitions", &parts.display().to_string()]);
    assert_eq!(code, 2);
    let _ = std::fs::remove_dir_all(&tmp);
}

#[test]
fn threads_flag_and_environment() {
    let c = curves().join("conic.json").display().to_string();
    let out = Command::new(env!("CARGO_BIN_EXE_galois"))
        .args(["--threads", "1", "compute", "--curve", &c])
        .env("GALOIS_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
