use aircode::channel::{run_sweep, transmit_estimate, ChannelModel, ChannelSpec};
use aircode::decoder::all_plans;
use aircode::encoder::Codeword;
use aircode::ff_matrix::BitVector;
use aircode::{grouping_report, AirMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

fn q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn crossover(model: ChannelModel, snr_db: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Codeword(BitVector::zeros(n));
    let spec = ChannelSpec::new(model, snr_db, 0).unwrap();
    transmit_estimate(&c, &spec, &mut rng).0.count_ones() as f64 / n as f64
}

#[test]
fn awgn_crossover_at_0_db() {
    let p = crossover(ChannelModel::Awgn, 0.0, 1_000_000, 1);
    let oracle = q(2f64.sqrt());
    assert!((oracle - 0.0786).abs() < 1e-4);
    assert!((p - oracle).abs() < 0.003, "{p} vs {oracle}");
}

#[test]
fn rayleigh_crossover_at_10_db() {
    let p = crossover(ChannelModel::Rayleigh, 10.0, 1_000_000, 2);
    let oracle = 0.5 * (1.0 - (10.0f64 / 11.0).sqrt());
    assert!((oracle - 0.0233).abs() < 1e-4);
    assert!((p - oracle).abs() < 0.002, "{p} vs {oracle}");
}

#[test]
fn ber_follows_xor_of_independent_flips() {
    // A receiver adding m noisy symbols errs when an odd number flip.
    // One receiver per symbol count: members of a group share symbols, so
    // their errors are correlated and cannot be pooled as binomial draws.
    let m = AirMatrix::from_params(13, 3).unwrap();
    let plans = all_plans(&m);
    let groups = grouping_report(&plans);
    let trials = 200_000;
    for p in [0.01, 0.05, 0.2] {
        let r = run_sweep(&m, &plans, ChannelModel::Bsc { crossover: p }, &[0.0], trials, 3).unwrap();
        for g in &groups {
            let oracle = (1.0 - (1.0 - 2.0 * p).powi(g.broadcasts as i32)) / 2.0;
            let count = r.points[0].receivers[g.receivers[0]];
            let sigma = (oracle * (1.0 - oracle) / count.trials as f64).sqrt();
            let got = count.ber();
            assert!((got - oracle).abs() <= 3.0 * sigma, "p={p} m={}: {got} vs {oracle}", g.broadcasts);
        }
    }
}

#[test]
fn group_curves_are_ordered_and_homogeneous() {
    let m = AirMatrix::from_params(13, 3).unwrap();
    let plans = all_plans(&m);
    let groups = grouping_report(&plans);
    let trials = 200_000;
    let r = run_sweep(&m, &plans, ChannelModel::Awgn, &[2.0, 4.0, 6.0], trials, 4).unwrap();
    let n = trials as f64;
    for (idx, point) in r.points.iter().enumerate() {
        // within a group: every pair indistinguishable at 3 sigma
        for g in &groups {
            for (i, &a) in g.receivers.iter().enumerate() {
                for &b in &g.receivers[i + 1..] {
                    let (pa, pb) = (point.receivers[a].ber(), point.receivers[b].ber());
                    let p = (pa + pb) / 2.0;
                    let se = (2.0 * p * (1.0 - p) / n).sqrt();
                    assert!((pa - pb).abs() <= 3.0 * se, "R{a} vs R{b} at {} dB", point.snr_db);
                }
            }
        }
        // more symbols, more errors
        let bers: Vec<f64> = groups.iter().map(|g| r.pooled(idx, &g.receivers).ber()).collect();
        assert!(bers.windows(2).all(|w| w[0] < w[1]), "{bers:?}");
    }
    // more SNR, fewer errors
    for g in &groups {
        let curve: Vec<f64> = (0..3).map(|i| r.pooled(i, &g.receivers).ber()).collect();
        assert!(curve.windows(2).all(|w| w[0] > w[1]), "{curve:?}");
    }
}

#[test]
fn sweeps_are_reproducible() {
    let m = AirMatrix::from_params(17, 7).unwrap();
    let plans = all_plans(&m);
    let run = || run_sweep(&m, &plans, ChannelModel::Awgn, &[1.0, 3.0], 5000, 77).unwrap().to_csv();
    assert_eq!(run(), run());
}

#[test]
fn table_grouping_for_17_7() {
    let m = AirMatrix::from_params(17, 7).unwrap();
    let g = grouping_report(&all_plans(&m));
    let sizes: Vec<(usize, usize)> = g.iter().map(|g| (g.broadcasts, g.receivers.len())).collect();
    // R9..R16 use one symbol, R6..R8 two, R3..R5 three, R0..R2 four
    assert_eq!(sizes, vec![(1, 8), (2, 3), (3, 3), (4, 3)]);
}
