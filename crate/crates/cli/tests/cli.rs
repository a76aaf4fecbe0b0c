use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn projcool(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projcool"))
        .args(args)
        .current_dir(cwd)
        .env_remove("PROJCOOL_OUT")
        .output()
        .expect("binary runs")
}

const SMALL_RUN: &str = r#"
experiment = "custom"
method = "trotter"
initial = { kind = "spread" }
steps = 12
epsilon = 0.05
seed = 9

[model]
preset = "model_1b"
half_extent = 15
"#;

fn assert_table(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# format: projcool-table/1"));
    assert_eq!(lines.next(), Some("step,t,overlap,norm,energy"));
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = projcool(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["run", "fig1", "fig2a", "fig2b", "fig3", "check", "sweep"] {
        assert!(text.contains(sub), "help lacks {sub}");
    }
}

#[test]
fn unknown_arguments_are_configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(projcool(&["fly"], dir.path()).status.code(), Some(2));
    assert_eq!(projcool(&["fig1", "--eps", "lots"], dir.path()).status.code(), Some(2));
}

#[test]
fn bad_config_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("missing.toml", None),
        ("syntax.toml", Some("experiment = \n")),
        ("field.toml", Some("experiment = \"custom\"\nwarp = 9\n[model]\npreset = \"model_1b\"\n")),
        ("dt.toml", Some("experiment = \"custom\"\ndt = 0.0\n[model]\npreset = \"model_1b\"\n")),
    ];
    for (name, body) in cases {
        if let Some(body) = body {
            fs::write(dir.path().join(name), body).unwrap();
        }
        let out = projcool(&["run", name], dir.path());
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn run_writes_tables_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), SMALL_RUN).unwrap();
    let out = projcool(&["run", "run.toml", "--out", "a"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_table(&dir.path().join("a/run.csv"));
    let manifest: toml::Table = fs::read_to_string(dir.path().join("a/manifest.toml")).unwrap().parse().unwrap();
    assert_eq!(manifest["format"].as_str(), Some("projcool-manifest/1"));
    assert_eq!(manifest["config"]["seed"].as_integer(), Some(9));

    let again = projcool(&["run", "run.toml", "--out", "b"], dir.path());
    assert_eq!(again.status.code(), Some(0));
    for f in ["run.csv", "manifest.toml"] {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap());
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), SMALL_RUN).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_projcool"))
        .args(["run", "run.toml"])
        .current_dir(dir.path())
        .env("PROJCOOL_OUT", "results")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_table(&dir.path().join("results/custom/run.csv"));
}

#[test]
fn figure_exit_codes_follow_checks() {
    let dir = tempfile::tempdir().unwrap();
    let clean = projcool(&["fig2a", "--out", "clean", "--eps", "0"], dir.path());
    assert_eq!(clean.status.code(), Some(0), "{}", String::from_utf8_lossy(&clean.stdout));
    assert_table(&dir.path().join("clean/pc_full_point_eps0.csv"));
    assert_table(&dir.path().join("clean/pc_trotter_spread_eps0.csv"));

    let noisy = projcool(&["fig2a", "--out", "noisy", "--seed", "3"], dir.path());
    let stdout = String::from_utf8_lossy(&noisy.stdout);
    let expected = if stdout.contains("FAIL") { 1 } else { 0 };
    assert_eq!(noisy.status.code(), Some(expected));
    assert!(dir.path().join("noisy/pc_trotter_point_eps0.05.csv").exists());
}

#[test]
fn sweep_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let grid = format!(
        "{}\n[grid]\ndt = [0.3, 0.2]\nkappa = [5.0, 10.0]\n",
        SMALL_RUN.replace("[model]", "[base.model]").replacen("experiment", "[base]\nexperiment", 1)
    );
    fs::write(dir.path().join("grid.toml"), grid).unwrap();
    let out = projcool(&["sweep", "grid.toml", "--out", "s"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "point,dt,steps,epsilon,kinetic_scale,kappa,tau,final_overlap,max_overlap");
    assert_eq!(lines.len(), 2 + 4);
}

#[test]
fn quick_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = projcool(&["check", "--quick"], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("== qubit equivalence"));
    assert!(!stdout.contains("FAIL"));
}
