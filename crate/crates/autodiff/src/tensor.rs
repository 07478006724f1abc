use crate::scalar::Scalar;

/// Dense rank-≤2 tensor. All parameters and activations in this workspace are
/// matrices (`[rows, cols]`); vectors are stored as single-row or
/// single-column matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorBase<S: Scalar> {
    shape: Vec<usize>,
    data: Vec<S>,
    grad: Option<Vec<S>>,
}

impl<S: Scalar> TensorBase<S> {
    pub fn new(shape: Vec<usize>, data: Vec<S>) -> Self {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "tensor data length must equal the product of its shape"
        );
        TensorBase {
            shape,
            data,
            grad: None,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TensorBase::new(vec![rows, cols], vec![S::zero(); rows * cols])
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        TensorBase::new(vec![r, c], data)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rows(&self) -> usize {
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        self.shape[1]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn grad(&self) -> Option<&[S]> {
        self.grad.as_deref()
    }

    /// Gradient accumulator with the same shape, created on first use.
    pub fn grad_mut(&mut self) -> &mut [S] {
        if self.grad.is_none() {
            self.grad = Some(vec![S::zero(); self.data.len()]);
        }
        self.grad.as_deref_mut().unwrap()
    }

    /// Split borrow of values and gradient, materialising the gradient
    /// buffer if absent.
    pub fn data_and_grad_mut(&mut self) -> (&mut [S], &mut [S]) {
        if self.grad.is_none() {
            self.grad = Some(vec![S::zero(); self.data.len()]);
        }
        (&mut self.data, self.grad.as_deref_mut().unwrap())
    }

    pub fn zero_grad(&mut self) {
        if let Some(g) = self.grad.as_deref_mut() {
            g.fill(S::zero());
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
