use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use opplod::io::parse_csv;

fn opplod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opplod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &Path, spec_text: &str) -> std::path::PathBuf {
    let spec = dir.join("spec.cfg");
    fs::write(&spec, spec_text).unwrap();
    let frames = dir.join("frames");
    let out = opplod(&["synth", "--spec", s(&spec), "--out", s(&frames)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    frames
}

#[test]
fn static_sequence_gives_zero_columns() {
    let dir = tempfile::tempdir().unwrap();
    let frames = synth(
        dir.path(),
        "kind = expanding_disk\nrate = 0\nframes = 6\nwidth = 80\nheight = 60\n",
    );
    assert_eq!(fs::read_dir(&frames).unwrap().count(), 6);
    let csv = dir.path().join("out.csv");
    let out = opplod(&[
        "run",
        "--in",
        s(&frames),
        "--model",
        "both",
        "--out",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert_eq!(r.response_opplod, Some(0.0));
        assert_eq!(r.response_dlgmd, Some(0.0));
        assert!(r.roi.is_none());
    }
}

#[test]
fn looming_disk_opplod_peaks_first() {
    let dir = tempfile::tempdir().unwrap();
    let frames = synth(dir.path(), "kind = expanding_disk\n");
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nc2 = 10\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = opplod(&[
        "run",
        "--config",
        s(&cfg),
        "--in",
        s(&frames),
        "--model",
        "both",
        "--out",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    let argmax = |get: &dyn Fn(&opplod::io::CsvRow) -> f64| {
        rows.iter()
            .filter(|r| !r.warm_up)
            .fold(
                (0, f64::MIN),
                |b, r| if get(r) > b.1 { (r.t, get(r)) } else { b },
            )
            .0
    };
    let o = argmax(&|r| r.response_opplod.unwrap());
    let d = argmax(&|r| r.response_dlgmd.unwrap());
    assert!(o < d, "opplod argmax {o}, dlgmd argmax {d}");
}

#[test]
fn identical_runs_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let frames = synth(dir.path(), "kind = expanding_disk\nframes = 12\nwidth = 100\nheight = 100\ncenter_x = 50\ncenter_y = 50\n");
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let out = opplod(&[
            "run",
            "--in",
            s(&frames),
            "--model",
            "both",
            "--out",
            s(&csv),
        ]);
        assert!(out.status.success());
        (fs::read(csv).unwrap(), out.stdout)
    };
    let (a, _) = run("a.csv");
    let (b, _) = run("b.csv");
    assert_eq!(a, b);
}

#[test]
fn normalize_flag_scales_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let frames = synth(dir.path(), "kind = expanding_disk\nframes = 10\nwidth = 100\nheight = 100\ncenter_x = 50\ncenter_y = 50\n");
    let csv = dir.path().join("n.csv");
    let out = opplod(&[
        "run",
        "--in",
        s(&frames),
        "--model",
        "dlgmd",
        "--out",
        s(&csv),
        "--normalize",
    ]);
    assert!(out.status.success());
    let rows = parse_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    let max = rows
        .iter()
        .map(|r| r.response_dlgmd.unwrap())
        .fold(0.0, f64::max);
    assert_eq!(max, 1.0);
    assert!(rows.iter().all(|r| r.response_opplod.is_none()));
}

#[test]
fn input_files_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let frames = synth(dir.path(), "kind = expanding_disk\nframes = 5\nwidth = 50\nheight = 50\ncenter_x = 25\ncenter_y = 25\n");
    let snapshot = |p: &Path| {
        let mut v: Vec<_> = fs::read_dir(p)
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                (p.clone(), fs::read(p).unwrap())
            })
            .collect();
        v.sort();
        v
    };
    let before = snapshot(&frames);
    let csv = dir.path().join("x.csv");
    assert!(opplod(&["run", "--in", s(&frames), "--out", s(&csv)])
        .status
        .success());
    assert_eq!(snapshot(&frames), before);
}

#[test]
fn missing_input_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = opplod(&[
        "run",
        "--in",
        s(&dir.path().join("absent")),
        "--model",
        "opplod",
        "--out",
        s(&dir.path().join("o.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("ERROR E_INPUT:"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn bad_config_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let frames = synth(
        dir.path(),
        "frames = 3\nwidth = 20\nheight = 20\ncenter_x = 10\ncenter_y = 10\n",
    );
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "sigma_e = 1\nwobble = 3\n").unwrap();
    let out = opplod(&[
        "run",
        "--config",
        s(&cfg),
        "--in",
        s(&frames),
        "--out",
        s(&dir.path().join("o.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("ERROR E_CONFIG:"));
}

#[test]
fn malformed_pgm_is_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    fs::create_dir(&frames).unwrap();
    fs::write(
        frames.join("frame_000000.pgm"),
        b"P5 2 2 1023\n\0\0\0\0\0\0\0\0",
    )
    .unwrap();
    let out = opplod(&[
        "run",
        "--in",
        s(&frames),
        "--out",
        s(&dir.path().join("o.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("ERROR E_FORMAT:"));
}

#[test]
fn usage_errors_are_exit_1() {
    assert_eq!(opplod(&[]).status.code(), Some(1));
    assert_eq!(opplod(&["frobnicate"]).status.code(), Some(1));
    let out = opplod(&["run", "--model", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("ERROR E_USAGE:"));
}

#[test]
fn tuning_csv_sorted_by_angle() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bar.cfg");
    fs::write(
        &spec,
        "kind = expanding_bar\nframes = 8\nwidth = 80\nheight = 80\ncenter_x = 40\ncenter_y = 40\n",
    )
    .unwrap();
    let csv = dir.path().join("t.csv");
    let out = opplod(&[
        "tuning",
        "--spec",
        s(&spec),
        "--angles",
        "90,0,45",
        "--out",
        s(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "angle_deg,peak_response");
    let angles: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(angles, ["0", "45", "90"]);
}

#[test]
fn rmo_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.txt");
    fs::write(
        &pairs,
        "# x1 y1 th1 m1 x2 y2 th2 m2\n1 0 0 2 -1 0 180 2\n1 0 0 2 -1 0 180 1\n0 0 0 1 0 0 90 1\n",
    )
    .unwrap();
    let csv = dir.path().join("r.csv");
    let out = opplod(&["rmo", "--pairs", s(&pairs), "--out", s(&csv)]);
    assert!(out.status.success());
    assert_eq!(
        fs::read_to_string(&csv).unwrap(),
        "pair_index,qualifies,rmo\n0,1,1\n1,1,0.666666667\n2,0,0\n"
    );

    fs::write(&pairs, "1 2 3\n").unwrap();
    let out = opplod(&["rmo", "--pairs", s(&pairs), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("ERROR E_FORMAT:"));
}

#[test]
fn raw_input_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("clip.raw");
    let (w, h) = (16u32, 12u32);
    let mut bytes = Vec::new();
    bytes.extend(w.to_le_bytes());
    bytes.extend(h.to_le_bytes());
    for t in 0..4u8 {
        bytes.extend((0..w * h).map(|i| (i as u8).wrapping_mul(t + 1)));
    }
    fs::write(&raw, &bytes).unwrap();
    let csv = dir.path().join("r.csv");
    let out = opplod(&["run", "--in", s(&raw), "--out", s(&csv)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        parse_csv(&fs::read_to_string(&csv).unwrap()).unwrap().len(),
        4
    );
}
