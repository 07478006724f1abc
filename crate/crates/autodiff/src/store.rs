use crate::scalar::Scalar;
use crate::tensor::TensorBase;

/// Handle to a parameter tensor inside a [`ParamStoreBase`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamId(pub(crate) usize);

/// Owns the learnable parameters of one network together with their gradient
/// accumulators. One store corresponds to one optimiser.
#[derive(Clone, Debug)]
pub struct ParamStoreBase<S: Scalar> {
    names: Vec<String>,
    tensors: Vec<TensorBase<S>>,
}

impl<S: Scalar> Default for ParamStoreBase<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> ParamStoreBase<S> {
    pub fn new() -> Self {
        ParamStoreBase {
            names: Vec::new(),
            tensors: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, tensor: TensorBase<S>) -> ParamId {
        self.names.push(name.into());
        self.tensors.push(tensor);
        ParamId(self.tensors.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn value(&self, id: ParamId) -> &TensorBase<S> {
        &self.tensors[id.0]
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut TensorBase<S> {
        &mut self.tensors[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.tensors.len()).map(ParamId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TensorBase<S>)> {
        self.names
            .iter()
            .map(|n| n.as_str())
            .zip(self.tensors.iter())
    }

    pub fn zero_grad(&mut self) {
        for t in &mut self.tensors {
            t.zero_grad();
        }
    }

    /// L2 norm over all gradients in the store.
    pub fn global_grad_norm(&self) -> S {
        let mut acc = S::zero();
        for t in &self.tensors {
            if let Some(g) = t.grad() {
                for &v in g {
                    acc += v * v;
                }
            }
        }
        acc.sqrt()
    }

    /// Copies parameter values from another store with identical layout.
    /// Used for hard target-network updates.
    pub fn copy_values_from(&mut self, other: &ParamStoreBase<S>) {
        assert_eq!(self.tensors.len(), other.tensors.len(), "store layout mismatch");
        for (dst, src) in self.tensors.iter_mut().zip(other.tensors.iter()) {
            assert_eq!(dst.shape(), src.shape(), "store shape mismatch");
            dst.data_mut().copy_from_slice(src.data());
        }
    }

    /// Flat copy of every parameter value, in insertion order.
    pub fn flat_values(&self) -> Vec<S> {
        let mut out = Vec::new();
        for t in &self.tensors {
            out.extend_from_slice(t.data());
        }
        out
    }

    pub fn load_flat_values(&mut self, flat: &[S]) {
        let mut off = 0;
        for t in &mut self.tensors {
            let n = t.len();
            t.data_mut().copy_from_slice(&flat[off..off + n]);
            off += n;
        }
        assert_eq!(off, flat.len(), "flat value length mismatch");
    }
}
