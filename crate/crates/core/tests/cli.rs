use std::path::Path;
use std::process::Command;

use cenlab::datasets::{encode_images, encode_labels, MnistSet, Rng};
use cenlab::harness::{initial_model, parse_cli, EXIT_DATA, EXIT_USAGE};
use cenlab::Matrix;

fn cenlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cenlab")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    cenlab(args).status.code().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["--frobnicate"]), EXIT_USAGE);
    assert_eq!(code(&["--epochs", "0"]), EXIT_USAGE);
    assert_eq!(code(&["--dataset", "mnist"]), EXIT_USAGE);
    assert_eq!(code(&["--dataset", "spiral"]), EXIT_USAGE);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn data_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing");
    let m = missing.to_str().unwrap();
    assert_eq!(code(&["--dataset", "mnist", "--mnist-images", m, "--mnist-labels", m]), EXIT_DATA);

    let bogus = dir.path().join("bogus");
    std::fs::write(&bogus, [0u8, 0, 8, 1, 0, 0, 0, 0]).unwrap();
    let b = bogus.to_str().unwrap();
    let out_dir = dir.path().join("out");
    let out = cenlab(&[
        "--dataset", "mnist", "--mnist-images", b, "--mnist-labels", b, "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2049"));
}

fn small_run(out: &Path, extra: &[&str]) {
    let mut args = vec![
        "--mode", "both", "--dataset", "circles", "--epochs", "4", "--checkpoint-every", "2",
        "--dataset-size", "90", "--batch-size", "32", "--seed", "7", "--out-dir", out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = cenlab(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn file_contract_and_svg_structure() {
    let dir = tempfile::tempdir().unwrap();
    small_run(dir.path(), &[]);
    assert_eq!(
        listing(dir.path()),
        vec![
            "metrics_cen.csv", "metrics_gan.csv", "scatter_cen_2.svg", "scatter_cen_4.svg",
            "scatter_gan_2.svg", "scatter_gan_4.svg", "summary.csv",
        ]
    );
    let csv = std::fs::read_to_string(dir.path().join("metrics_gan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("epoch,js_divergence,cumulative_time_ms,g_updates,d_updates\n"));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2);

    let svg = std::fs::read_to_string(dir.path().join("scatter_cen_4.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let fills: Vec<&str> = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle"))
        .map(|n| n.parent().unwrap().attribute("fill").unwrap())
        .collect();
    assert_eq!(fills.len(), 90 + 90);
    let first_orange = fills.iter().position(|&f| f == "#ff7f0e").unwrap();
    assert_eq!(first_orange, 90);
    assert!(fills[..90].iter().all(|&f| f == "#1f77b4"));
}

#[test]
fn no_timing_outputs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    small_run(a.path(), &["--no-timing"]);
    small_run(b.path(), &["--no-timing"]);
    let names = listing(a.path());
    assert_eq!(names, listing(b.path()));
    for name in names {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn both_modes_start_from_identical_weights() {
    let config = parse_cli(["cenlab", "--mode", "both", "--seed", "11"]).unwrap();
    let bits = |m: &cenlab::training::GanModel| -> Vec<u64> {
        m.generator
            .flat_params()
            .into_iter()
            .chain(m.discriminator.flat_params())
            .map(f64::to_bits)
            .collect()
    };
    let gan = initial_model(&config, 2).unwrap();
    let cen = initial_model(&config, 2).unwrap();
    assert_eq!(bits(&gan), bits(&cen));
    let other = initial_model(&parse_cli(["cenlab", "--seed", "12"]).unwrap(), 2).unwrap();
    assert_ne!(bits(&gan), bits(&other));
}

#[test]
fn mnist_run_writes_digit_grids() {
    let dir = tempfile::tempdir().unwrap();
    let n = 40;
    let mut rng = Rng::new(1);
    let pixels = (0..n * 784).map(|_| f64::from((rng.next_f64() * 256.0) as u8) / 255.0).collect();
    let labels = (0..n).map(|i| (i % 10) as u8).collect();
    let set = MnistSet::new(Matrix::from_vec(n, 784, pixels).unwrap(), labels, 28, 28).unwrap();
    let ip = dir.path().join("img");
    let lp = dir.path().join("lbl");
    std::fs::write(&ip, encode_images(&set)).unwrap();
    std::fs::write(&lp, encode_labels(&set)).unwrap();
    let out = dir.path().join("out");
    let o = cenlab(&[
        "--mode", "cen", "--dataset", "mnist", "--mnist-images", ip.to_str().unwrap(),
        "--mnist-labels", lp.to_str().unwrap(), "--epochs", "2", "--checkpoint-every", "1",
        "--batch-size", "16", "--out-dir", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(listing(&out), vec!["grid_cen_1.svg", "grid_cen_2.svg", "metrics_cen.csv"]);
    let svg = std::fs::read_to_string(out.join("grid_cen_2.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("rect")).count(), 1 + 16 * 784);
}
