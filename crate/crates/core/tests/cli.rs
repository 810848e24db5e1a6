use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lewisgame::cli::decode_pgm;
use lewisgame::numerics::spearman;
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lewisgame"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).env("LEWISGAME_THREADS", "1").args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Small synthetic experiment that trains in well under a second.
fn small_config(dim: usize) -> Value {
    json!({
        "output_dir": "out",
        "seeds": 2,
        "data": {
            "synthetic": {
                "n_classes": 2, "concepts_per_class": 3, "images_per_concept": 10, "dim": dim
            }
        },
        "train": {
            "vocab_size": 10, "hidden": 8, "dim": dim, "total_batches": 300, "learning_rate": 0.05,
            "validation_every": 100, "validation_pairs": 64, "curve_probe_size": 20
        },
        "analysis": {
            "probe_size": 30, "swap_pairs": 50, "swap_runs": 2,
            "eval": { "runs": 2, "batches": 20, "batch_size": 16 }
        }
    })
}

fn write_config(dir: &Path, name: &str, cfg: &Value) -> String {
    fs::write(dir.join(name), serde_json::to_vec_pretty(cfg).unwrap()).unwrap();
    name.to_string()
}

fn schema_check(schema: &str, instance: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema);
    let schema: Value = serde_json::from_slice(&fs::read(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    if let Err(e) = validator.validate(instance) {
        panic!("{instance} fails {schema}: {e}");
    }
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn full_pipeline_emits_schema_valid_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let cfg = small_config(16);
    schema_check("experiment_config.schema.json", &cfg);
    let c = write_config(dir, "cfg.json", &cfg);

    let summary = ok(dir, &["--config", &c, "gen-data"]);
    assert!(summary.contains("60 rows") && summary.contains("d=16"), "{summary}");
    ok(dir, &["--config", &c, "train"]);

    let ledger = fs::read_to_string(dir.join("out/ledger.jsonl")).unwrap();
    assert_eq!(ledger.lines().count(), 2);
    for line in ledger.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        schema_check("ledger_record.schema.json", &rec);
        let success = rec["final_mvr"].as_f64().unwrap() >= 0.8;
        assert_eq!(rec["success"].as_bool().unwrap(), success);
        for key in ["checkpoint", "curve", "run"] {
            assert!(dir.join("out").join(rec[key].as_str().unwrap()).exists());
        }
    }
    schema_check("run_record.schema.json", &read_json(&dir.join("out/seed_000/run.json")));
    let curve = fs::read_to_string(dir.join("out/seed_000/curve.csv")).unwrap();
    let batches: Vec<&str> = curve.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(curve.lines().next().unwrap(), "batch,mvr,rsa_sr,rsa_si,rsa_ri");
    assert_eq!(batches, ["0", "100", "200", "300"]);

    ok(dir, &["--config", &c, "analyze", "--checkpoint", "out/seed_001/checkpoint.lgck"]);
    let adir = dir.join("out/analysis/seed_001");
    let alignment = read_json(&adir.join("alignment.json"));
    schema_check("alignment_report.schema.json", &alignment);
    let subgroups = read_json(&adir.join("subgroups.json"));
    schema_check("subgroup_reports.schema.json", &subgroups);
    assert_eq!(subgroups["reports"].as_array().unwrap().len(), 6);
    let ck_hash = lewisgame::agents::sha256_hex(&fs::read(dir.join("out/seed_001/checkpoint.lgck")).unwrap());
    assert_eq!(alignment["checkpoint_id"], json!(ck_hash));
    assert_eq!(subgroups["checkpoint_id"], json!(ck_hash));

    // recompute the sender/receiver correlation from the dumped pairs
    let mut reader = csv::Reader::from_path(adir.join("pairs.csv")).unwrap();
    let (mut s, mut r) = (Vec::new(), Vec::new());
    for row in reader.records() {
        let row = row.unwrap();
        s.push(row[3].parse::<f64>().unwrap());
        r.push(row[4].parse::<f64>().unwrap());
    }
    assert_eq!(s.len(), alignment["n_pairs"].as_u64().unwrap() as usize);
    let rho = spearman(&s, &r).unwrap();
    assert!((rho - alignment["rho_sr"].as_f64().unwrap()).abs() <= 1e-12);
    let shift = fs::read_to_string(adir.join("shift_top.csv")).unwrap();
    assert_eq!(shift.lines().count(), 1 + 2 * 10);

    let probe = ok(dir, &["--config", &c, "probe", "--checkpoint", "out/seed_000/checkpoint.lgck"]);
    assert!(probe.contains("swap test"), "{probe}");
    let table = read_json(&dir.join("out/probe/cross_eval.json"));
    schema_check("cross_eval_table.schema.json", &table);
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.iter().filter(|r| !r["noise"].is_null()).count(), 1);
    schema_check("swap_test.schema.json", &read_json(&dir.join("out/probe/swap_test.json")));

    ok(dir, &["--config", &c, "report"]);
    let report = read_json(&dir.join("out/report.json"));
    schema_check("report.schema.json", &report);
    assert_eq!(report["seeds"], json!(2));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut cfg = small_config(12);
    let a = write_config(dir, "a.json", &cfg);
    cfg["output_dir"] = json!("out_b");
    let b = write_config(dir, "b.json", &cfg);
    for c in [&a, &b] {
        ok(dir, &["--config", c, "gen-data"]);
        ok(dir, &["--config", c, "train"]);
    }
    let files = [
        "features.lfs1",
        "features.manifest.json",
        "ledger.jsonl",
        "seed_000/checkpoint.lgck",
        "seed_001/checkpoint.lgck",
        "seed_000/curve.csv",
        "seed_001/curve.csv",
        "seed_001/run.json",
    ];
    let snapshot = |root: &str| -> Vec<Vec<u8>> { files.iter().map(|f| fs::read(dir.join(root).join(f)).unwrap()).collect() };
    let first = snapshot("out");
    assert_eq!(first, snapshot("out_b"));

    // running the same command again leaves every output unchanged
    ok(dir, &["--config", &a, "gen-data"]);
    ok(dir, &["--config", &a, "train"]);
    assert_eq!(first, snapshot("out"));

    ok(dir, &["--config", &a, "analyze", "--checkpoint", "out/seed_000/checkpoint.lgck"]);
    let align = fs::read(dir.join("out/analysis/seed_000/alignment.json")).unwrap();
    let pairs = fs::read(dir.join("out/analysis/seed_000/pairs.csv")).unwrap();
    ok(dir, &["--config", &a, "analyze", "--checkpoint", "out/seed_000/checkpoint.lgck"]);
    assert_eq!(align, fs::read(dir.join("out/analysis/seed_000/alignment.json")).unwrap());
    assert_eq!(pairs, fs::read(dir.join("out/analysis/seed_000/pairs.csv")).unwrap());
}

#[test]
fn flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let c = write_config(dir, "cfg.json", &small_config(8));
    ok(dir, &["--config", &c, "--out", "elsewhere", "gen-data"]);
    ok(dir, &["--config", &c, "--out", "elsewhere", "--seed", "5", "--seeds", "1", "--mode", "diff", "train"]);
    let ledger = fs::read_to_string(dir.join("elsewhere/ledger.jsonl")).unwrap();
    let rec: Value = serde_json::from_str(ledger.lines().next().unwrap()).unwrap();
    assert_eq!((rec["seed"].clone(), rec["mode"].clone()), (json!(5), json!("different-image")));
    assert!(dir.join("elsewhere/seed_005/checkpoint.lgck").exists());
}

#[test]
fn default_gen_data_has_five_thousand_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ok(tmp.path(), &["--out", "d", "gen-data"]);
    assert!(out.contains("5000 rows") && out.contains("50 concepts") && out.contains("5 classes"), "{out}");
}

#[test]
fn singleton_concepts_warn_for_different_image_mode() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut cfg = small_config(8);
    cfg["data"]["synthetic"]["images_per_concept"] = json!(1);
    cfg["train"]["mode"] = json!("different-image");
    let c = write_config(dir, "cfg.json", &cfg);
    let out = run(dir, &["--config", &c, "gen-data"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn exit_codes_follow_contract() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // configuration problems
    let bad = write_config(dir, "bad.json", &json!({"train": {"learning_rat": 0.1}}));
    assert_eq!(code(&run(dir, &["--config", &bad, "gen-data"])), 2);
    let zero = write_config(dir, "zero.json", &json!({"seeds": 0}));
    assert_eq!(code(&run(dir, &["--config", &zero, "train"])), 2);
    assert_eq!(code(&run(dir, &["--mode", "sideways", "train"])), 2);
    assert_eq!(code(&run(dir, &["probe"])), 2);

    // I/O problems
    assert_eq!(code(&run(dir, &["--config", "missing.json", "train"])), 3);
    let c = write_config(dir, "cfg.json", &small_config(16));
    assert_eq!(code(&run(dir, &["--config", &c, "train"])), 3);
    assert_eq!(code(&run(dir, &["--config", &c, "probe", "--checkpoint", "nope.lgck"])), 3);

    // every seed failing
    let mut failing = small_config(16);
    failing["train"]["total_batches"] = json!(0);
    let f = write_config(dir, "fail.json", &failing);
    ok(dir, &["--config", &f, "gen-data"]);
    let out = run(dir, &["--config", &f, "train"]);
    assert_eq!(code(&out), 4);
    assert_eq!(fs::read_to_string(dir.join("out/ledger.jsonl")).unwrap().lines().count(), 2);

    // a checkpoint whose input dimension differs from the store
    let mut other = small_config(8);
    other["output_dir"] = json!("out8");
    other["seeds"] = json!(1);
    let o = write_config(dir, "eight.json", &other);
    ok(dir, &["--config", &o, "gen-data"]);
    ok(dir, &["--config", &o, "train"]);
    let foreign = ["--config", f.as_str(), "analyze", "--checkpoint", "out8/seed_000/checkpoint.lgck"];
    assert_eq!(code(&run(dir, &foreign)), 5);
    let mixed = [
        "--config",
        f.as_str(),
        "probe",
        "--checkpoint",
        "out/seed_000/checkpoint.lgck",
        "--checkpoint",
        "out8/seed_000/checkpoint.lgck",
    ];
    assert_eq!(code(&run(dir, &mixed)), 5);
}

#[test]
fn probe_without_store_fills_only_noise() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut cfg = small_config(8);
    cfg["seeds"] = json!(1);
    let c = write_config(dir, "cfg.json", &cfg);
    ok(dir, &["--config", &c, "gen-data"]);
    ok(dir, &["--config", &c, "train"]);
    fs::remove_file(dir.join("out/features.lfs1")).unwrap();
    ok(dir, &["--config", &c, "probe", "--checkpoint", "out/seed_000/checkpoint.lgck"]);
    let table = read_json(&dir.join("out/probe/cross_eval.json"));
    let row = table["rows"].as_array().unwrap().iter().find(|r| !r["noise"].is_null()).unwrap().clone();
    assert!(row["same_image"].is_null() && row["different-image"].is_null());
    let noise = row["noise"].as_f64().unwrap();
    assert!((0.0..=100.0).contains(&noise));
}

#[test]
fn render_noise_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    ok(dir, &["render-noise", "--noise-seed", "3", "--dim", "4096", "--output", "big.pgm"]);
    let (w, h, px) = decode_pgm(&fs::read(dir.join("big.pgm")).unwrap()).unwrap();
    assert_eq!((w, h, px.len()), (64, 64, 4096));
    assert_eq!((*px.iter().min().unwrap(), *px.iter().max().unwrap()), (0, 255));

    fs::write(dir.join("const.txt"), "0.3 0.3 0.3 0.3 0.3 0.3").unwrap();
    ok(dir, &["render-noise", "--vector", "const.txt", "--width", "3", "--output", "c.pgm"]);
    let (w, h, px) = decode_pgm(&fs::read(dir.join("c.pgm")).unwrap()).unwrap();
    assert_eq!((w, h), (3, 2));
    assert!(px.iter().all(|&p| p == 128));

    // re-read values match an independent min-max scaling
    let values: [f64; 9] = [-2.0, 0.5, 1.0, 3.0, 0.0, -1.0, 2.5, 1.5, 0.25];
    fs::write(dir.join("v.json"), serde_json::to_vec(&values).unwrap()).unwrap();
    ok(dir, &["render-noise", "--vector", "v.json", "--output", "v.pgm"]);
    let (w, h, px) = decode_pgm(&fs::read(dir.join("v.pgm")).unwrap()).unwrap();
    assert_eq!((w, h), (3, 3));
    let expected: Vec<u8> = values.iter().map(|v| ((v + 2.0) / 5.0 * 255.0).round() as u8).collect();
    assert_eq!(px, expected);

    assert_eq!(code(&run(dir, &["render-noise", "--noise-seed", "1", "--dim", "10"])), 2);
    fs::write(dir.join("empty.txt"), "").unwrap();
    assert_eq!(code(&run(dir, &["render-noise", "--vector", "empty.txt"])), 2);
    assert_eq!(code(&run(dir, &["render-noise", "--vector", "absent.txt"])), 3);
}
