use crate::error::AdError;
use crate::scalar::Scalar;
use crate::store::ParamStoreBase;

/// Adam hyperparameters. Betas and epsilon are the usual defaults.
#[derive(Clone, Copy, Debug)]
pub struct AdamHyper {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamHyper {
    pub fn with_lr(lr: f64) -> Self {
        AdamHyper {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Adam optimiser state for one parameter store: first and second moments per
/// parameter plus a shared step counter for bias correction.
#[derive(Clone, Debug)]
pub struct AdamBase<S: Scalar> {
    hyper: AdamHyper,
    step_count: u64,
    moments: Vec<(Vec<S>, Vec<S>)>,
}

impl<S: Scalar> AdamBase<S> {
    pub fn new(store: &ParamStoreBase<S>, lr: f64) -> Self {
        Self::with_hyper(store, AdamHyper::with_lr(lr))
    }

    pub fn with_hyper(store: &ParamStoreBase<S>, hyper: AdamHyper) -> Self {
        let moments = store
            .ids()
            .map(|id| {
                let n = store.value(id).len();
                (vec![S::zero(); n], vec![S::zero(); n])
            })
            .collect();
        AdamBase {
            hyper,
            step_count: 0,
            moments,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Bias-corrected Adam update from the gradients currently in the store.
    /// Gradients are left untouched; callers zero them afterwards.
    pub fn step(&mut self, store: &mut ParamStoreBase<S>) -> Result<(), AdError> {
        self.step_count += 1;
        let t = self.step_count as i32;
        let b1 = S::from_f64_lossy(self.hyper.beta1);
        let b2 = S::from_f64_lossy(self.hyper.beta2);
        let lr = S::from_f64_lossy(self.hyper.lr);
        let eps = S::from_f64_lossy(self.hyper.eps);
        let bc1 = S::one() - b1.powi(t);
        let bc2 = S::one() - b2.powi(t);
        for (idx, id) in store.ids().collect::<Vec<_>>().into_iter().enumerate() {
            let (m, v) = &mut self.moments[idx];
            let (data, grad) = store.value_mut(id).data_and_grad_mut();
            for i in 0..data.len() {
                let g = grad[i];
                if !g.is_finite() {
                    return Err(AdError::NonFinite { op: "adam_step" });
                }
                m[i] = b1 * m[i] + (S::one() - b1) * g;
                v[i] = b2 * v[i] + (S::one() - b2) * g * g;
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                data[i] = data[i] - lr * mhat / (vhat.sqrt() + eps);
            }
        }
        Ok(())
    }
}

/// Scales all gradients in the store so their global L2 norm is at most
/// `max_norm`. Returns the pre-clip norm.
pub fn clip_global_norm<S: Scalar>(store: &mut ParamStoreBase<S>, max_norm: S) -> S {
    assert!(max_norm > S::zero(), "max_norm must be positive");
    let norm = store.global_grad_norm();
    if norm > max_norm {
        let scale = max_norm / norm;
        for id in store.ids().collect::<Vec<_>>() {
            for g in store.value_mut(id).grad_mut() {
                *g *= scale;
            }
        }
    }
    norm
}

/// Plain gradient descent, used where the improvement analysis assumes an
/// unadulterated gradient step.
pub fn sgd_step<S: Scalar>(store: &mut ParamStoreBase<S>, lr: S) {
    for id in store.ids().collect::<Vec<_>>() {
        let (data, grad) = store.value_mut(id).data_and_grad_mut();
        for i in 0..data.len() {
            data[i] = data[i] - lr * grad[i];
        }
    }
}
