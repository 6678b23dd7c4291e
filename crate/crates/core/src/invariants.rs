//! Property tests for invariants that cut across modules.

use crate::corr::{corr_statistics, corr_support, CorrConfig};
use crate::gen::{sample_instance, sample_signal_pair};
use crate::io::InstanceFile;
use crate::lowdeg::exact::{rat, to_f64};
use crate::lowdeg::{chi2, ChiRegime, ChiSqConfig, UnitValues};
use crate::model::{classify_regime, corr_sample_bound, ModelParams, SignalPair, ValueSet};
use crate::recovery::{am, recover_noiseless, rho_error, Proportions};
use crate::reductions::{pad_embed, pad_instance, spr_transform, unpad_estimates, PadConfig, SprMode};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn matrix(n: usize, p: usize, seed: u64) -> DMatrix<f64> {
    let mut g = crate::rng::rng(seed);
    DMatrix::from_fn(n, p, |_, _| crate::rng::normal(&mut g))
}

fn vec_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, len)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_is_a_pseudometric(a1 in vec_strategy(6), a2 in vec_strategy(6), b1 in vec_strategy(6), b2 in vec_strategy(6), c1 in vec_strategy(6), c2 in vec_strategy(6)) {
        let d = |x: (&[f64], &[f64]), y: (&[f64], &[f64])| rho_error(x, y).unwrap();
        let (a, b, c) = ((&a1[..], &a2[..]), (&b1[..], &b2[..]), (&c1[..], &c2[..]));
        prop_assert_eq!(d(a, a), 0.0);
        prop_assert_eq!(d(a, (&a2, &a1)), 0.0);
        prop_assert!((d(a, b) - d(b, a)).abs() <= 1e-12);
        prop_assert!(d(a, c) <= d(a, b) + d(b, c) + 1e-9);
        prop_assert!(d(a, b) >= 0.0);
    }

    #[test]
    fn am_objective_never_increases(seed in any::<u64>(), n in 8usize..40, p in 1usize..5) {
        let x = matrix(n, p, seed);
        let mut g = crate::rng::rng(seed ^ 1);
        let y: Vec<f64> = (0..n).map(|_| 3.0 * crate::rng::normal(&mut g)).collect();
        let i1: Vec<f64> = (0..p).map(|_| crate::rng::normal(&mut g)).collect();
        let i2: Vec<f64> = (0..p).map(|_| crate::rng::normal(&mut g)).collect();
        let r = am(&x, &y, (&i1, &i2), 6).unwrap();
        for w in r.objective_trace.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-9) + 1e-12, "{:?}", r.objective_trace);
        }
    }

    #[test]
    fn corr_is_scale_and_permutation_invariant(seed in any::<u64>(), c in 0.01..100.0f64, shift in 0usize..7) {
        let (n, p) = (30, 7);
        let x = matrix(n, p, seed);
        let y: Vec<f64> = (0..n).map(|i| x[(i, 0)] - 2.0 * x[(i, 3)] + 0.1 * i as f64).collect();
        let u = corr_statistics(&x, &y).unwrap();
        let scaled: Vec<f64> = y.iter().map(|v| v * c).collect();
        let us = corr_statistics(&x, &scaled).unwrap();
        for (a, b) in u.iter().zip(&us) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
        let perm: Vec<usize> = (0..p).map(|j| (j + shift) % p).collect();
        let xp = DMatrix::from_fn(n, p, |i, j| x[(i, perm[j])]);
        let up = corr_statistics(&xp, &y).unwrap();
        for j in 0..p {
            prop_assert_eq!(up[j], u[perm[j]]);
        }
        let cfg = CorrConfig::default();
        let s = corr_support(&x, &y, &cfg).unwrap();
        let sp = corr_support(&xp, &y, &cfg).unwrap();
        let mut mapped: Vec<usize> = sp.indices.iter().map(|&j| perm[j]).collect();
        mapped.sort_unstable();
        prop_assert_eq!(mapped, s.indices);
    }

    #[test]
    fn pad_round_trip_is_exact(seed in any::<u64>(), n in 1usize..12, p in 1usize..9, c in 0.2..1.0f64, sigma in 0.1..3.0f64) {
        let x = matrix(n, p, seed);
        let y: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let (xt, yt, rec) = pad_instance(&x, &y, &PadConfig { c, sigma, permutation_seed: seed ^ 7 }).unwrap();
        prop_assert_eq!(xt.ncols(), rec.total());
        let m = rec.padded;
        // Columns of X reappear unchanged at their shuffled positions.
        for (t, &col) in rec.perm.iter().enumerate() {
            if col >= m {
                prop_assert_eq!(xt.column(t), x.column(col - m));
            }
        }
        // The response shift is the V row sum over σ.
        for i in 0..n {
            let vsum: f64 = rec.perm.iter().enumerate().filter(|(_, &c)| c < m).map(|(t, _)| xt[(i, t)]).sum();
            prop_assert!((yt[i] - vsum / sigma - y[i]).abs() <= 1e-9 * (1.0 + yt[i].abs()));
        }
        let beta: Vec<f64> = (0..p).map(|j| j as f64 - 1.0).collect();
        let emb = pad_embed(&beta, &rec).unwrap();
        let (b1, b2) = unpad_estimates(&emb, &emb, &rec).unwrap();
        prop_assert_eq!(&b1, &beta);
        prop_assert_eq!(&b2, &beta);
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), p in 2usize..12, n in 1usize..15, phi in 0.0..1.0f64, sigma in 0.0..2.0f64) {
        let k = 1 + (seed as usize % p);
        let s = sample_signal_pair(p, k, &ValueSet::pm1(), 1.0, 1.0, seed).unwrap();
        let params = ModelParams::new(p, n, k, sigma, phi, ValueSet::pm1()).unwrap();
        let inst = sample_instance(&params, &s, seed).unwrap();
        let file = InstanceFile::from_instance(&inst);
        let mut buf = Vec::new();
        file.write_to(&mut buf).unwrap();
        let back = InstanceFile::read_from(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &file);
        let mut again = Vec::new();
        back.write_to(&mut again).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn signal_pairs_satisfy_their_invariants(seed in any::<u64>(), p in 2usize..30, xi in 0.0..1.0f64, tau in -1.0..1.0f64) {
        let k = 1 + (seed as usize % (p / 2).max(1));
        let s = sample_signal_pair(p, k, &ValueSet::pm1(), xi, tau, seed).unwrap();
        prop_assert_eq!(s.support1.len(), k);
        prop_assert_eq!(s.support2.len(), k);
        prop_assert!((norm(&s.beta1) - norm(&s.beta2)).abs() < 1e-12);
        prop_assert!(s.beta1.iter().chain(&s.beta2).all(|v| *v == 0.0 || v.abs() == 1.0));
        let inter = s.support1.iter().filter(|j| s.support2.contains(j)).count();
        prop_assert!((s.xi - inter as f64 / k as f64).abs() < 1e-12);
        let rebuilt = SignalPair::from_vectors(s.beta1.clone(), s.beta2.clone()).unwrap();
        prop_assert!((rebuilt.tau - s.tau).abs() < 1e-12);
    }

    #[test]
    fn regime_is_invariant_under_relabeling(seed in any::<u64>(), phi in 0.0..1.0f64, sigma in 0.0..2.0f64, snap in any::<bool>()) {
        let phi = if snap { 0.5 } else { phi };
        let s = sample_signal_pair(12, 4, &ValueSet::pm1(), 0.5, 0.0, seed).unwrap();
        let swapped = SignalPair::from_vectors(s.beta2.clone(), s.beta1.clone()).unwrap();
        let a = classify_regime(&s, phi, sigma);
        let b = classify_regime(&swapped, 1.0 - phi, sigma);
        prop_assert_eq!(a.tag, b.tag);
        prop_assert!((a.beta_avg_min_sq - b.beta_avg_min_sq).abs() < 1e-12);
    }

    #[test]
    fn corr_bound_is_monotone(seed in any::<u64>(), p in 10usize..500, sigma in 0.1..3.0f64, factor in 1.0..3.0f64) {
        let s = sample_signal_pair(10, 3, &ValueSet::pm1(), 0.0, 0.0, seed).unwrap();
        let bound = |p: usize, sigma: f64| {
            let params = ModelParams::new(p.max(10), 1, 3, sigma, 0.3, ValueSet::pm1()).unwrap();
            corr_sample_bound(&classify_regime(&s, 0.3, sigma), &params, 0.5).unwrap()
        };
        prop_assert!(bound(p, sigma) <= bound(p + 1, sigma));
        // Larger σ means smaller snr.
        prop_assert!(bound(p, sigma) <= bound(p, sigma * factor));
    }

    #[test]
    fn spr_abs_forgets_the_sign(seed in any::<u64>(), n in 1usize..20) {
        let x = matrix(n, 3, seed);
        let y: Vec<f64> = (0..n).map(|i| (i as f64 - 4.0) * 0.7).collect();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        for mode in [SprMode::Abs, SprMode::Square] {
            prop_assert_eq!(spr_transform(&x, &y, mode, seed), spr_transform(&x, &neg, mode, seed));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn chi2_is_nondecreasing_and_modes_agree(p in 2usize..5, n in 1usize..4, sigma2 in 1i64..4, sbm in any::<bool>()) {
        let k = 1 + (n + p) % p;
        let regime = if sbm { ChiRegime::Sbmslrd } else { ChiRegime::Slrd };
        let cfg = ChiSqConfig::new(p, n, k, rat(sigma2), 6, regime, UnitValues::Pm1);
        let exact = chi2(&cfg).unwrap();
        let float = chi2(&cfg.clone().float()).unwrap();
        let cum = exact.cumulative();
        prop_assert!(cum.iter().all(|v| *v >= 0.0));
        for w in cum.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        let e = to_f64(&exact.exact.unwrap().value);
        prop_assert!((e - float.value).abs() <= 1e-12 * e.abs().max(1e-300), "{e} vs {}", float.value);
    }

    #[test]
    fn pipeline_is_permutation_equivariant(seed in 0u64..1000, shift in 1usize..40) {
        let (p, n, k) = (40, 600, 2);
        let s = sample_signal_pair(p, k, &ValueSet::pm1(), 0.0, 0.0, seed).unwrap();
        let params = ModelParams::new(p, n, k, 0.0, 0.3, ValueSet::pm1()).unwrap();
        let inst = sample_instance(&params, &s, seed + 1).unwrap();
        let perm: Vec<usize> = (0..p).map(|j| (j * 7 + shift) % p).collect();
        let xp = DMatrix::from_fn(n, p, |i, j| inst.x[(i, perm[j])]);
        let cfg = CorrConfig::default();
        let a = recover_noiseless(&inst.x, &inst.y, &cfg, 5, Proportions::Estimated);
        let b = recover_noiseless(&xp, &inst.y, &cfg, 5, Proportions::Estimated);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                for j in 0..p {
                    prop_assert!((b.beta1_hat[j] - a.beta1_hat[perm[j]]).abs() <= 1e-8);
                    prop_assert!((b.beta2_hat[j] - a.beta2_hat[perm[j]]).abs() <= 1e-8);
                }
            }
            (Err(ea), Err(eb)) => prop_assert_eq!(ea, eb),
            (a, b) => prop_assert!(false, "outcomes differ: {:?} vs {:?}", a.map(|r| r.rho), b.map(|r| r.rho)),
        }
    }
}
