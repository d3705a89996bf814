use std::f64::consts::PI;

use proptest::prelude::*;

use opplod::grid::{convolve, gaussian_kernel, BoundaryPolicy, Frame, Kernel};
use opplod::io::{parse_stimulus_spec, stimulus_spec_to_string, RunConfig};
use opplod::pipeline::{run_dlgmd, DLgmd, DirectionalMaps, DpcParams, OppLod, OppLodParams};
use opplod::rmo::Point;
use opplod::stimuli::{render, StimulusKind, StimulusSpec};

fn frame_strategy(w: usize, h: usize) -> impl Strategy<Value = Frame> {
    proptest::collection::vec(-1.0..1.0f64, w * h)
        .prop_map(move |v| Frame::from_vec(w, h, 0, v).unwrap())
}

fn kernel_strategy() -> impl Strategy<Value = Kernel> {
    (0usize..3).prop_flat_map(|r| {
        let side = 2 * r + 1;
        proptest::collection::vec(-1.0..1.0f64, side * side)
            .prop_map(move |w| Kernel::new(r, w).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convolution_is_linear(a in frame_strategy(9, 7), b in frame_strategy(9, 7), k in kernel_strategy(), s in -3.0..3.0f64) {
        let lhs = convolve(&a.zip_map(&b, |x, y| s * x + y).unwrap(), &k, BoundaryPolicy::ZeroPad).unwrap();
        let ca = convolve(&a, &k, BoundaryPolicy::ZeroPad).unwrap();
        let cb = convolve(&b, &k, BoundaryPolicy::ZeroPad).unwrap();
        let rhs = ca.zip_map(&cb, |x, y| s * x + y).unwrap();
        for (l, r) in lhs.data().iter().zip(rhs.data()) {
            prop_assert!((l - r).abs() < 1e-9);
        }
    }

    #[test]
    fn convolution_bounded_by_l1(a in frame_strategy(8, 8), k in kernel_strategy()) {
        let c = convolve(&a, &k, BoundaryPolicy::ZeroPad).unwrap();
        let l1: f64 = k.weights().iter().map(|w| w.abs()).sum();
        let amax = a.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in c.data() {
            prop_assert!(v.abs() <= l1 * amax + 1e-12);
        }
    }

    #[test]
    fn stimulus_spec_round_trip(
        kind in prop_oneof![
            Just(StimulusKind::ExpandingBar),
            Just(StimulusKind::ExpandingDisk),
            Just(StimulusKind::ContractingDisk),
            Just(StimulusKind::TranslatingBlock),
        ],
        w in 1usize..300, h in 1usize..300, frames in 2usize..80,
        cx in -10.0..300.0f64, cy in -10.0..300.0f64,
        rate in 0.0..5.0f64, size in 0.0..40.0f64,
        angle in 0.0..360.0f64,
    ) {
        let spec = StimulusSpec {
            kind, width: w, height: h, frames,
            center: Point::new(cx, cy),
            rate, initial_size: size,
            bar_angle: angle.to_radians(),
            ..StimulusSpec::default()
        };
        let back = parse_stimulus_spec(&stimulus_spec_to_string(&spec)).unwrap();
        prop_assert_eq!(back.kind, spec.kind);
        prop_assert_eq!((back.width, back.height, back.frames), (w, h, frames));
        prop_assert_eq!(back.center, spec.center);
        prop_assert_eq!(back.rate, rate);
        prop_assert_eq!(back.initial_size, size);
        prop_assert!((back.bar_angle - spec.bar_angle).abs() < 1e-12);
    }

    #[test]
    fn run_config_round_trip(
        sigma_e in 0.3..3.0f64, sigma_i in 0.3..4.0f64, gain in 0.0..10.0f64,
        threshold in 0.0..1.0f64, c2 in 0.1..50.0f64, rows in 1usize..8, cols in 1usize..8,
        overlap in 0.0..0.9f64,
    ) {
        let mut cfg = RunConfig::default();
        cfg.dpc.sigma_e = sigma_e;
        cfg.dpc.sigma_i = sigma_i;
        cfg.dpc.inhibition_gain = gain;
        cfg.omj.screen_threshold = threshold;
        cfg.enhance.c2 = c2;
        cfg.grid.rows = rows;
        cfg.grid.cols = cols;
        cfg.grid.overlap = overlap;
        let back: RunConfig = cfg.to_config_string().parse().unwrap();
        prop_assert_eq!(back, cfg);
    }
}

fn small_params() -> OppLodParams {
    let mut p = OppLodParams::default();
    p.grid.rows = 3;
    p.grid.cols = 3;
    p
}

#[test]
fn translation_prefers_matching_channel() {
    let params = OppLodParams::default();
    let dirs = params.mde.directions().to_vec();
    for &theta in &dirs {
        let spec = StimulusSpec {
            kind: StimulusKind::TranslatingBlock,
            width: 80,
            height: 80,
            frames: 16,
            center: Point::new(40.0, 40.0),
            rate: 1.5,
            initial_size: 6.0,
            bar_angle: theta,
            ..StimulusSpec::default()
        };
        let seq = render(&spec).unwrap();
        let mut det = OppLod::new(small_params(), 80, 80).unwrap();
        let mut sums = vec![0.0; dirs.len()];
        for f in seq.frames() {
            let d = det.step_detailed(f).unwrap();
            for (s, m) in sums.iter_mut().zip(d.directional.maps()) {
                *s += m.sum();
            }
        }
        let along = dirs.iter().position(|&d| d == theta).unwrap();
        let against = dirs
            .iter()
            .position(|&d| {
                ((d - theta - PI).rem_euclid(2.0 * PI)).min((theta + PI - d).rem_euclid(2.0 * PI))
                    < 1e-9
            })
            .unwrap();
        assert!(
            sums[along] > sums[against],
            "theta {theta}: along {} against {}",
            sums[along],
            sums[against]
        );
    }
}

#[test]
fn opponency_needs_both_channels_of_a_pair() {
    let det = OppLod::new(small_params(), 60, 60).unwrap();
    let dirs = det.params().mde.directions().to_vec();
    let blob = Frame::from_fn(60, 60, 3, |x, y| {
        let (dx, dy) = (x as f64 - 30.0, y as f64 - 30.0);
        (-(dx * dx + dy * dy) / 50.0).exp()
    })
    .unwrap();
    let zero = Frame::zeros(60, 60, 3).unwrap();

    let silent = DirectionalMaps::new(dirs.clone(), vec![zero.clone(); dirs.len()]).unwrap();
    assert!(det.omj().step(&silent).unwrap().is_zero());

    // One channel per pair active: no opposing partner, no output.
    let pairs = det.params().mde.opposing_pairs().unwrap();
    let mut maps = vec![zero.clone(); dirs.len()];
    for &(i, _) in &pairs {
        maps[i] = blob.clone();
    }
    let lonely = DirectionalMaps::new(dirs.clone(), maps).unwrap();
    assert!(det.omj().step(&lonely).unwrap().is_zero());

    let all = DirectionalMaps::new(dirs.clone(), vec![blob; dirs.len()]).unwrap();
    assert!(!det.omj().step(&all).unwrap().is_zero());
}

#[test]
fn unit_output_ignores_pixels_outside_its_field() {
    let mut det = OppLod::new(small_params(), 90, 90).unwrap();
    let seq = render(&StimulusSpec {
        width: 90,
        height: 90,
        frames: 8,
        center: Point::new(45.0, 45.0),
        ..StimulusSpec::default()
    })
    .unwrap();
    let mut last = None;
    for f in seq.frames() {
        last = Some(det.step_detailed(f).unwrap());
    }
    let maps = last.unwrap().directional;
    for (u, field) in det.grid().fields().iter().enumerate() {
        let before = det.omj().unit_opponency(&maps, u).unwrap();
        let edited: Vec<Frame> = maps
            .maps()
            .iter()
            .map(|m| {
                Frame::from_fn(90, 90, m.t(), |x, y| {
                    if field.contains(x as f64, y as f64) {
                        m.get(x, y)
                    } else {
                        7.0
                    }
                })
                .unwrap()
            })
            .collect();
        let edited = DirectionalMaps::new(maps.directions().to_vec(), edited).unwrap();
        assert_eq!(
            det.omj().unit_opponency(&edited, u).unwrap(),
            before,
            "unit {u}"
        );
    }
}

#[test]
fn dlgmd_tracks_expanding_disk() {
    let seq = render(&StimulusSpec::default()).unwrap();
    let rec = run_dlgmd(&seq, &DpcParams::baseline()).unwrap();
    let mut running = 0.0f64;
    for r in rec.iter().filter(|r| !r.warm_up && r.t <= 44) {
        assert!(
            r.response >= 0.97 * running,
            "t {}: {} after {}",
            r.t,
            r.response,
            running
        );
        running = running.max(r.response);
    }
    assert!(running > 0.0);
}

#[test]
fn faster_edge_excites_more() {
    let edge = |speed: f64, t: usize| {
        Frame::from_fn(60, 40, t, move |x, _| {
            let pos = 10.0 + speed * t as f64;
            (pos - x as f64 + 0.5).clamp(0.0, 1.0)
        })
        .unwrap()
    };
    let total = |speed: f64| {
        let mut det = DLgmd::new(&DpcParams::baseline(), 60, 40).unwrap();
        let mut sum = 0.0;
        for t in 0..10 {
            let (rec, s) = det.step_map(&edge(speed, t)).unwrap();
            if !rec.warm_up {
                sum += s.sum();
            }
        }
        sum
    };
    let (slow, fast) = (total(1.0), total(2.0));
    assert!(fast > slow, "fast {fast} slow {slow}");
}

#[test]
fn gaussian_kernel_normalized() {
    for (sigma, r) in [(1.0, 6), (2.0, 6), (0.7, 2)] {
        let k = gaussian_kernel(sigma, r).unwrap();
        assert!((k.sum() - 1.0).abs() < 1e-12);
    }
}
