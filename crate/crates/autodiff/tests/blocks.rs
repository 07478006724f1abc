//! Forward-path oracles for the network blocks, softmax utilities, Adam and
//! gradient clipping.

use autodiff::{
    categorical_sample, clip_global_norm, entropy, log_softmax, softmax, Adam, Graph, GruParams,
    MlpParams, ParamStore, Tensor,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Naive loop re-implementation of the two-layer MLP forward pass.
fn mlp_oracle(store: &ParamStore, mlp: &MlpParams, x: &[f64], rows: usize) -> Vec<f64> {
    let w1 = store.value(mlp.w1).data();
    let b1 = store.value(mlp.b1).data();
    let w2 = store.value(mlp.w2).data();
    let b2 = store.value(mlp.b2).data();
    let (i, h, o) = (mlp.in_dim, mlp.hidden_dim, mlp.out_dim);
    let mut out = vec![0.0; rows * o];
    for r in 0..rows {
        let mut hid = vec![0.0; h];
        for c in 0..h {
            let mut acc = b1[c];
            for p in 0..i {
                acc += x[r * i + p] * w1[p * h + c];
            }
            hid[c] = acc.max(0.0);
        }
        for c in 0..o {
            let mut acc = b2[c];
            for p in 0..h {
                acc += hid[p] * w2[p * o + c];
            }
            out[r * o + c] = acc;
        }
    }
    out
}

/// Naive loop re-implementation of one GRU step for a single row.
fn gru_oracle(store: &ParamStore, gru: &GruParams, x: &[f64], h: &[f64]) -> Vec<f64> {
    let hd = gru.hidden_dim;
    let sig = |v: f64| 1.0 / (1.0 + (-v).exp());
    let lin = |w: &[f64], u: &[f64], b: &[f64], hin: &[f64]| -> Vec<f64> {
        (0..hd)
            .map(|c| {
                let mut acc = b[c];
                for p in 0..gru.in_dim {
                    acc += x[p] * w[p * hd + c];
                }
                for p in 0..hd {
                    acc += hin[p] * u[p * hd + c];
                }
                acc
            })
            .collect()
    };
    let z: Vec<f64> = lin(
        store.value(gru.wz).data(),
        store.value(gru.uz).data(),
        store.value(gru.bz).data(),
        h,
    )
    .into_iter()
    .map(sig)
    .collect();
    let r: Vec<f64> = lin(
        store.value(gru.wr).data(),
        store.value(gru.ur).data(),
        store.value(gru.br).data(),
        h,
    )
    .into_iter()
    .map(sig)
    .collect();
    let rh: Vec<f64> = r.iter().zip(h).map(|(a, b)| a * b).collect();
    let cand: Vec<f64> = lin(
        store.value(gru.wc).data(),
        store.value(gru.uc).data(),
        store.value(gru.bc).data(),
        &rh,
    )
    .into_iter()
    .map(f64::tanh)
    .collect();
    (0..hd).map(|i| (1.0 - z[i]) * h[i] + z[i] * cand[i]).collect()
}

#[test]
fn mlp_zero_params_annihilate_any_input() {
    let mut store = ParamStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mlp = MlpParams::init(&mut store, "n", 3, 4, 2, 1.0, &mut rng);
    for id in store.ids().collect::<Vec<_>>() {
        store.value_mut(id).data_mut().fill(0.0);
    }
    let y = mlp.forward_plain(&store, &[1.0, -2.0, 5.5, 0.0, 3.0, -1.0], 2);
    assert!(y.iter().all(|&v| v == 0.0));
}

#[test]
fn mlp_identity_weights_apply_relu() {
    let mut store = ParamStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mlp = MlpParams::init(&mut store, "n", 2, 2, 2, 1.0, &mut rng);
    let eye = vec![1.0, 0.0, 0.0, 1.0];
    store.value_mut(mlp.w1).data_mut().copy_from_slice(&eye);
    store.value_mut(mlp.w2).data_mut().copy_from_slice(&eye);
    store.value_mut(mlp.b1).data_mut().fill(0.0);
    store.value_mut(mlp.b2).data_mut().fill(0.0);
    // Hidden layer is ReLU(input): [-1, 2] -> [0, 2]; linear head passes it on.
    let y = mlp.forward_plain(&store, &[-1.0, 2.0], 1);
    assert_eq!(y, vec![0.0, 2.0]);
}

#[test]
fn mlp_forward_matches_naive_oracle_to_1e12() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let mut store = ParamStore::new();
        let mlp = MlpParams::init(&mut store, "n", 4, 8, 3, 1.0, &mut rng);
        let rows = 5;
        let x: Vec<f64> = (0..rows * 4).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let fast = mlp.forward_plain(&store, &x, rows);
        let mut g = Graph::new();
        let xc = g.constant(rows, 4, x.clone());
        let yid = mlp.forward(&mut g, &store, xc).unwrap();
        let slow = mlp_oracle(&store, &mlp, &x, rows);
        for i in 0..rows * 3 {
            assert!((fast[i] - slow[i]).abs() < 1e-12);
            assert!((g.value(yid)[i] - slow[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn mlp_rejects_wrong_input_width() {
    let mut store = ParamStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mlp = MlpParams::init(&mut store, "n", 3, 4, 2, 1.0, &mut rng);
    let mut g = Graph::new();
    let xc = g.constant(1, 2, vec![0.0, 0.0]);
    assert!(matches!(
        mlp.forward(&mut g, &store, xc),
        Err(autodiff::AdError::Dimension { .. })
    ));
}

#[test]
fn gru_zero_params_halve_the_hidden_state() {
    let mut store = ParamStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gru = GruParams::init(&mut store, "g", 2, 3, 2, 1.0, &mut rng);
    for id in store.ids().collect::<Vec<_>>() {
        store.value_mut(id).data_mut().fill(0.0);
    }
    let h = vec![0.4, -0.8, 0.2];
    let h1 = gru.step_plain(&store, &[1.0, 1.0], &h, 1);
    for (a, b) in h1.iter().zip(h.iter()) {
        assert!((a - 0.5 * b).abs() < 1e-15);
    }
}

#[test]
fn gru_step_matches_loop_oracle_and_stays_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let mut store = ParamStore::new();
        let gru = GruParams::init(&mut store, "g", 3, 5, 2, 1.0, &mut rng);
        let x: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect();
        let h: Vec<f64> = (0..5).map(|_| rng.random::<f64>() * 1.8 - 0.9).collect();
        let fast = gru.step_plain(&store, &x, &h, 1);
        let slow = gru_oracle(&store, &gru, &x, &h);
        for i in 0..5 {
            assert!((fast[i] - slow[i]).abs() < 1e-12);
            assert!(fast[i] > -1.0 && fast[i] < 1.0, "hidden not in (-1,1)");
        }
        let mut g = Graph::new();
        let xc = g.constant(1, 3, x.clone());
        let hc = g.constant(1, 5, h.clone());
        let hid = gru.step(&mut g, &store, xc, hc).unwrap();
        for i in 0..5 {
            assert!((g.value(hid)[i] - slow[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn gru_rejects_hidden_width_mismatch() {
    let mut store = ParamStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gru = GruParams::init(&mut store, "g", 3, 4, 2, 1.0, &mut rng);
    let mut g = Graph::new();
    let xc = g.constant(1, 3, vec![0.0; 3]);
    let hc = g.constant(1, 5, vec![0.0; 5]);
    assert!(matches!(
        gru.step(&mut g, &store, xc, hc),
        Err(autodiff::AdError::Dimension { .. })
    ));
}

#[test]
fn softmax_uniform_and_overflow_cases() {
    let p: Vec<f64> = softmax(&[0.0, 0.0, 0.0]);
    for &v in &p {
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }
    assert!((entropy(&p) - 3.0f64.ln()).abs() < 1e-12);

    let p: Vec<f64> = softmax(&[1000.0, 0.0]);
    assert!(p[0] > 0.999999 && p[0].is_finite());
    assert!(p[1] >= 0.0 && p[1] < 1e-6);

    let lp: Vec<f64> = log_softmax(&[1000.0, 0.0]);
    assert!(lp.iter().all(|v| v.is_finite()));
}

#[test]
fn softmax_sums_to_one_and_is_shift_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..6);
        let logits: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 20.0 - 10.0).collect();
        let p = softmax(&logits);
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        let c = rng.random::<f64>() * 8.0 - 4.0;
        let shifted: Vec<f64> = logits.iter().map(|v| v + c).collect();
        let q = softmax(&shifted);
        for (a, b) in p.iter().zip(q.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn categorical_sample_frequencies_within_3_sigma() {
    let probs = vec![0.2, 0.5, 0.3];
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let n = 100_000usize;
    let mut counts = [0usize; 3];
    for _ in 0..n {
        counts[categorical_sample(&probs, &mut rng)] += 1;
    }
    for (i, &p) in probs.iter().enumerate() {
        let mean = p * n as f64;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let diff = (counts[i] as f64 - mean).abs();
        assert!(diff < 3.0 * sigma, "arm {i}: {} vs {mean} (3s={})", counts[i], 3.0 * sigma);
    }
}

#[test]
fn adam_zero_gradient_leaves_parameters_unchanged() {
    let mut store = ParamStore::new();
    let id = store.add("p", Tensor::new(vec![1, 3], vec![1.0, -2.0, 3.0]));
    let mut adam = Adam::new(&store, 0.1);
    store.zero_grad();
    adam.step(&mut store).unwrap();
    assert_eq!(store.value(id).data(), &[1.0, -2.0, 3.0]);
}

#[test]
fn adam_first_step_moves_by_lr_times_sign() {
    let mut store = ParamStore::new();
    let id = store.add("p", Tensor::new(vec![1, 3], vec![0.0, 0.0, 0.0]));
    let mut adam = Adam::new(&store, 0.05);
    {
        let (_, grad) = store.value_mut(id).data_and_grad_mut();
        grad.copy_from_slice(&[0.3, -7.0, 0.001]);
    }
    adam.step(&mut store).unwrap();
    assert_eq!(adam.step_count(), 1);
    let p = store.value(id).data();
    assert!((p[0] + 0.05).abs() < 1e-6);
    assert!((p[1] - 0.05).abs() < 1e-6);
    assert!((p[2] + 0.05).abs() < 1e-4); // eps keeps tiny grads slightly short
}

#[test]
fn adam_rejects_nan_gradients() {
    let mut store = ParamStore::new();
    let id = store.add("p", Tensor::new(vec![1, 1], vec![0.0]));
    let mut adam = Adam::new(&store, 0.1);
    {
        let (_, grad) = store.value_mut(id).data_and_grad_mut();
        grad[0] = f64::NAN;
    }
    assert!(matches!(
        adam.step(&mut store),
        Err(autodiff::AdError::NonFinite { .. })
    ));
}

#[test]
fn adam_descends_on_a_quadratic() {
    let mut store = ParamStore::new();
    let id = store.add("x", Tensor::new(vec![1, 1], vec![1.0]));
    let mut adam = Adam::new(&store, 0.1);
    let mut traj = vec![1.0f64];
    for _ in 0..50 {
        let x = store.value(id).data()[0];
        store.zero_grad();
        {
            let (_, grad) = store.value_mut(id).data_and_grad_mut();
            grad[0] = 2.0 * x;
        }
        adam.step(&mut store).unwrap();
        traj.push(store.value(id).data()[0]);
    }
    // Warm-up descent is monotone while far from the optimum, and the tail
    // settles near zero.
    for k in 0..8 {
        assert!(traj[k + 1].abs() < traj[k].abs());
    }
    assert!(traj[50].abs() < 0.2);
    assert!(traj[50] * traj[50] < 1e-2);
}

#[test]
fn clip_global_norm_scales_only_above_threshold() {
    let mut store = ParamStore::new();
    let id = store.add("p", Tensor::new(vec![1, 2], vec![0.0, 0.0]));
    {
        let (_, grad) = store.value_mut(id).data_and_grad_mut();
        grad.copy_from_slice(&[3.0, 4.0]); // norm 5
    }
    let norm = clip_global_norm(&mut store, 10.0);
    assert_eq!(norm, 5.0);
    assert_eq!(store.value(id).grad().unwrap(), &[3.0, 4.0]);

    {
        let (_, grad) = store.value_mut(id).data_and_grad_mut();
        grad.copy_from_slice(&[30.0, 40.0]); // norm 50
    }
    clip_global_norm(&mut store, 10.0);
    let g = store.value(id).grad().unwrap();
    assert!((g[0] - 6.0).abs() < 1e-12);
    assert!((g[1] - 8.0).abs() < 1e-12);
}

#[test]
fn clip_global_norm_property_on_random_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let mut store = ParamStore::new();
        let n = rng.random_range(1..20);
        let id = store.add("p", Tensor::new(vec![1, n], vec![0.0; n]));
        {
            let (_, grad) = store.value_mut(id).data_and_grad_mut();
            for v in grad.iter_mut() {
                *v = rng.random::<f64>() * 200.0 - 100.0;
            }
        }
        let max_norm = rng.random::<f64>() * 20.0 + 0.1;
        clip_global_norm(&mut store, max_norm);
        assert!(store.global_grad_norm() <= max_norm + 1e-9);
    }
}

#[test]
fn identical_seeds_give_bit_identical_parameter_trajectories() {
    let run = || {
        let mut rng = ChaCha8Rng::seed_from_u64(314);
        let mut store = ParamStore::new();
        let mlp = MlpParams::init(&mut store, "n", 3, 8, 2, 0.01, &mut rng);
        let mut adam = Adam::new(&store, 1e-3);
        for step in 0..20 {
            let x: Vec<f64> = (0..6).map(|_| rng.random::<f64>()).collect();
            store.zero_grad();
            let mut g = Graph::new();
            let xc = g.constant(2, 3, x);
            let y = mlp.forward(&mut g, &store, xc).unwrap();
            let lp = g.log_softmax_rows(y);
            let picked = g.gather_cols(lp, &[step % 2, (step + 1) % 2]);
            let loss = g.dot(picked, &[-0.5, -0.5]);
            g.backward(loss, &mut store).unwrap();
            clip_global_norm(&mut store, 10.0);
            adam.step(&mut store).unwrap();
        }
        store.flat_values()
    };
    let a = run();
    let b = run();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b.iter()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn generic_scalar_supports_f32() {
    use autodiff::{GraphBase, MlpParams, ParamStoreBase};
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut store: ParamStoreBase<f32> = ParamStoreBase::new();
    let mlp = MlpParams::init(&mut store, "n", 2, 4, 2, 1.0, &mut rng);
    let mut g: GraphBase<f32> = GraphBase::new();
    let x = g.constant(1, 2, vec![0.5f32, -0.5]);
    let y = mlp.forward(&mut g, &store, x).unwrap();
    let lp = g.log_softmax_rows(y);
    let picked = g.gather_cols(lp, &[0]);
    let loss = g.sum_all(picked);
    g.backward(loss, &mut store).unwrap();
    assert!(store.global_grad_norm() > 0.0);
}
