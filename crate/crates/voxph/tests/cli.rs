use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use voxph::diagram::from_json;
use voxph::features::FeatureTable;
use voxph_core::vectorize::betti_curve;

const SYNTH: &str = r#"
seed = 11
count = 3

[[classes]]
label = "NC"
shape = "solid_ball"
center = [5.0, 5.0, 5.0]
radius = 3.0
dims = [11, 11, 11]
foreground_bin = 20
background_bin = 80
jitter = 1

[[classes]]
label = "MCI"
shape = "hollow_shell"
center = [6.0, 6.0, 6.0]
inner_radius = 3.0
outer_radius = 5.0
dims = [13, 13, 13]
foreground_bin = 20
background_bin = 80
jitter = 1

[[classes]]
label = "AD"
shape = "solid_torus"
center = [7.0, 7.0, 3.5]
major_radius = 4.0
minor_radius = 2.0
dims = [15, 15, 8]
foreground_bin = 20
background_bin = 80
"#;

fn voxph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voxph")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &Path) -> PathBuf {
    let cfg = dir.join("synth.toml");
    fs::write(&cfg, SYNTH).unwrap();
    let out = dir.join("data");
    let o = voxph(&["synth", s(&cfg), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.join("manifest.toml")
}

fn extract(manifest: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["extract", s(manifest), "--out", s(out)];
    args.extend_from_slice(extra);
    voxph(&args)
}

#[test]
fn extract_shapes_and_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = synth(dir.path());
    assert_eq!(fs::read_dir(manifest.parent().unwrap()).unwrap().count(), 10);

    let csv = dir.path().join("f.csv");
    let diagrams = dir.path().join("pd");
    let o = extract(&manifest, &csv, &["--diagrams", s(&diagrams), "--workers", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = FeatureTable::read(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(table.names.len(), 300);
    assert_eq!(table.len(), 9);
    assert_eq!(table.labels[..3], ["NC", "NC", "NC"]);

    // CSV values equal Betti curves of the emitted diagram JSON, bit for bit.
    for (id, row) in table.ids.iter().zip(&table.rows) {
        let (d, _) = from_json(&fs::read_to_string(diagrams.join(format!("{id}.json"))).unwrap()).unwrap();
        let from_json: Vec<f64> = (0..3)
            .flat_map(|k| betti_curve(&d[k], 100).unwrap().values)
            .map(f64::from)
            .collect();
        assert!(row.iter().zip(&from_json).all(|(a, b)| a.to_bits() == b.to_bits()), "{id}");
    }

    // torus volumes carry one loop on [fg, bg)
    let torus = &table.rows[6];
    assert!((20..80).all(|n| torus[100 + n - 1] == 1.0));

    let many = dir.path().join("many.csv");
    assert!(extract(&manifest, &many, &["--workers", "4"]).status.success());
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&many).unwrap());

    let two = dir.path().join("two.csv");
    assert!(extract(&manifest, &two, &["--dims", "1,2"]).status.success());
    let t = FeatureTable::read(fs::File::open(&two).unwrap()).unwrap();
    assert_eq!(t.names.len(), 200);
    assert_eq!(t.names[0], "b1_001");

    let sil = dir.path().join("sil.csv");
    assert!(extract(&manifest, &sil, &["--vec", "silhouette:1", "--dims", "2"]).status.success());
    let t = FeatureTable::read(fs::File::open(&sil).unwrap()).unwrap();
    assert_eq!(t.names[99], "s2_100");
}

#[test]
fn synth_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = synth(a.path());
    let mb = synth(b.path());
    for entry in fs::read_dir(ma.parent().unwrap()).unwrap() {
        let name = entry.unwrap().file_name();
        let da = fs::read(ma.parent().unwrap().join(&name)).unwrap();
        let db = fs::read(mb.parent().unwrap().join(&name)).unwrap();
        assert_eq!(da, db, "{name:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    fs::write(&empty, "").unwrap();
    let out = dir.path().join("e.csv");
    assert_eq!(extract(&empty, &out, &[]).status.code(), Some(0));
    let header = fs::read_to_string(&out).unwrap();
    assert_eq!(header.lines().count(), 1);
    assert_eq!(header.split(',').count(), 302);

    let manifest = synth(dir.path());
    let mut text = fs::read_to_string(&manifest).unwrap();
    text.push_str("\n[[volumes]]\npath = \"missing.npy\"\nlabel = \"AD\"\n");
    let partial = dir.path().join("data/partial.toml");
    fs::write(&partial, text).unwrap();
    let o = extract(&partial, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.npy"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 10);

    assert_eq!(extract(&manifest, &out, &["--range", "fixed:9"]).status.code(), Some(1));
    assert_eq!(extract(&manifest, &out, &["--bogus"]).status.code(), Some(1));
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[[volumes]]\npath = \"a.npy\"\nlabel = \"NC\"\ncolour = 3\n").unwrap();
    assert_eq!(extract(&bad, &out, &[]).status.code(), Some(1));
    assert_eq!(voxph(&["--help"]).status.code(), Some(0));
}

#[test]
fn diagram_command() {
    let dir = tempfile::tempdir().unwrap();
    let constant = dir.path().join("c.npy");
    fs::write(&constant, voxph::io::encode_npy_u16([3, 3, 3], &[5; 27])).unwrap();
    let o = voxph(&["diagram", s(&constant), "--range", "fixed:1:100"]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "{\"n_levels\":100,\"direction\":\"sub\",\"dims\":{\"0\":[[5,null]],\"1\":[],\"2\":[]}}\n"
    );

    let flat = dir.path().join("flat.npy");
    let pixels: Vec<u16> = (0..25).map(|i| (i * 37 % 11 + 1) as u16).collect();
    fs::write(&flat, voxph::io::encode_npy_u16([5, 5, 1], &pixels)).unwrap();
    let o = voxph(&["diagram", s(&flat), "--levels", "11", "--range", "fixed:1:11"]);
    let (d, _) = from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(d[2].is_empty());
    assert!(!d[0].is_empty());

    let manifest = synth(dir.path());
    let shell = manifest.parent().unwrap().join("MCI_000.npy");
    let o = voxph(&["diagram", s(&shell), "--range", "fixed:1:100"]);
    let (d, _) = from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(d[2].pairs().iter().any(|p| p.persistence().unwrap_or(0) >= 30));
    let o2 = voxph(&["diagram", s(&shell), "--range", "fixed:1:100", "--direction", "super"]);
    assert!(String::from_utf8(o2.stdout).unwrap().contains("\"direction\":\"super\""));
}

#[test]
fn classify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = synth(dir.path());
    let csv = dir.path().join("f.csv");
    assert!(extract(&manifest, &csv, &[]).status.success());

    let out = dir.path().join("report");
    let args = ["classify", s(&csv), "--out", s(&out), "--folds", "3", "--n-estimators", "20"];
    let o = voxph(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["learning_rate"], 0.2);
    assert_eq!(report["config"]["max_depth"], 7);
    assert_eq!(report["config"]["colsample_bytree"], 0.3);
    assert_eq!(report["class_names"], serde_json::json!(["NC", "MCI", "AD"]));
    for key in ["accuracy", "precision", "recall", "f1", "sensitivity", "specificity", "roc_auc"] {
        assert!(report["mean"][key].is_number(), "{key}");
    }
    let confusion = fs::read_to_string(out.join("confusion.csv")).unwrap();
    assert!(confusion.starts_with("true,NC,MCI,AD\nNC,"));
    assert!(fs::read_to_string(out.join("roc.csv")).unwrap().starts_with("fold,class,fpr,tpr,threshold\n"));

    let first = fs::read(out.join("report.json")).unwrap();
    assert!(voxph(&args).status.success());
    assert_eq!(first, fs::read(out.join("report.json")).unwrap());

    let binary = dir.path().join("binary");
    let o = voxph(&["classify", s(&csv), "--out", s(&binary), "--task", "binary", "--folds", "3", "--n-estimators", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(binary.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["class_names"], serde_json::json!(["NC", "MCI+AD"]));
    assert_eq!(report["config"]["objective"], "binary_logistic");
}
