use rand::Rng;

use crate::graph::kernels;
use crate::scalar::Scalar;

/// Max-subtracted softmax; safe for large logits.
pub fn softmax<S: Scalar>(logits: &[S]) -> Vec<S> {
    kernels::softmax(logits)
}

pub fn log_softmax<S: Scalar>(logits: &[S]) -> Vec<S> {
    kernels::log_softmax(logits)
}

/// Shannon entropy of a probability vector, with the 0 log 0 = 0 convention.
pub fn entropy<S: Scalar>(probs: &[S]) -> S {
    let mut acc = S::zero();
    for &p in probs {
        if p > S::zero() {
            acc -= p * p.ln();
        }
    }
    acc
}

/// Draws an index from a categorical distribution using the provided
/// generator. The final index absorbs any floating-point shortfall.
pub fn categorical_sample<S: Scalar, R: Rng>(probs: &[S], rng: &mut R) -> usize {
    debug_assert!(!probs.is_empty());
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cum += p.to_f64().unwrap_or(0.0);
        if u < cum {
            return i;
        }
    }
    probs.len() - 1
}
