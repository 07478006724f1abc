use crate::error::AdError;
use crate::scalar::Scalar;
use crate::store::{ParamId, ParamStoreBase};
use crate::tensor::TensorBase;

/// Handle to a node in a [`GraphBase`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeId(usize);

#[derive(Debug)]
enum Op<S: Scalar> {
    Constant,
    Param(ParamId),
    Matmul(NodeId, NodeId),
    Add(NodeId, NodeId),
    /// `[m,n] + [1,n]`, the bias broadcast.
    AddRow(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Scale(NodeId, S),
    Relu(NodeId),
    Sigmoid(NodeId),
    Tanh(NodeId),
    LogSoftmaxRows(NodeId),
    SoftmaxRows(NodeId),
    /// Picks `a[r, idx[r]]` per row, producing `[m,1]`.
    GatherCols(NodeId, Vec<usize>),
    SumRows(NodeId),
    /// Weighted sum of a `[m,1]` column with a constant weight vector.
    Dot(NodeId, Vec<S>),
    MeanAll(NodeId),
    SumAll(NodeId),
}

struct Node<S: Scalar> {
    shape: [usize; 2],
    value: Vec<S>,
    op: Op<S>,
}

/// Wengert-list computation graph. Forward operations append nodes;
/// [`GraphBase::backward`] replays the tape in reverse and accumulates
/// parameter gradients into the owning store.
pub struct GraphBase<S: Scalar> {
    nodes: Vec<Node<S>>,
}

impl<S: Scalar> Default for GraphBase<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> GraphBase<S> {
    pub fn new() -> Self {
        GraphBase { nodes: Vec::new() }
    }

    fn push(&mut self, shape: [usize; 2], value: Vec<S>, op: Op<S>) -> NodeId {
        debug_assert_eq!(shape[0] * shape[1], value.len());
        self.nodes.push(Node { shape, value, op });
        NodeId(self.nodes.len() - 1)
    }

    pub fn shape(&self, id: NodeId) -> [usize; 2] {
        self.nodes[id.0].shape
    }

    pub fn value(&self, id: NodeId) -> &[S] {
        &self.nodes[id.0].value
    }

    /// Value of a `[1,1]` node.
    pub fn scalar_value(&self, id: NodeId) -> S {
        assert_eq!(self.nodes[id.0].shape, [1, 1], "not a scalar node");
        self.nodes[id.0].value[0]
    }

    // ---- leaves ----------------------------------------------------------

    pub fn constant(&mut self, rows: usize, cols: usize, data: Vec<S>) -> NodeId {
        assert_eq!(rows * cols, data.len(), "constant shape mismatch");
        self.push([rows, cols], data, Op::Constant)
    }

    pub fn constant_tensor(&mut self, t: &TensorBase<S>) -> NodeId {
        assert_eq!(t.shape().len(), 2, "graph tensors are rank-2");
        self.constant(t.rows(), t.cols(), t.data().to_vec())
    }

    /// Leaf that reads a parameter tensor; gradients flow back into the store.
    pub fn param(&mut self, store: &ParamStoreBase<S>, id: ParamId) -> NodeId {
        let t = store.value(id);
        assert_eq!(t.shape().len(), 2, "parameters are rank-2");
        self.push([t.rows(), t.cols()], t.data().to_vec(), Op::Param(id))
    }

    // ---- arithmetic ------------------------------------------------------

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let [m, k] = self.shape(a);
        let [k2, n] = self.shape(b);
        assert_eq!(k, k2, "matmul inner dimensions differ: {k} vs {k2}");
        let mut out = vec![S::zero(); m * n];
        kernels::matmul(self.value(a), self.value(b), m, k, n, &mut out);
        self.push([m, n], out, Op::Matmul(a, b))
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert_eq!(self.shape(a), self.shape(b), "add shape mismatch");
        let v = zip_map(self.value(a), self.value(b), |x, y| x + y);
        self.push(self.shape(a), v, Op::Add(a, b))
    }

    /// Broadcasts a `[1,n]` row (bias) over every row of `a`.
    pub fn add_row(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let [m, n] = self.shape(a);
        assert_eq!(self.shape(b), [1, n], "add_row expects a [1,n] bias");
        let av = self.value(a);
        let bv = self.value(b);
        let mut out = Vec::with_capacity(m * n);
        for r in 0..m {
            for c in 0..n {
                out.push(av[r * n + c] + bv[c]);
            }
        }
        self.push([m, n], out, Op::AddRow(a, b))
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert_eq!(self.shape(a), self.shape(b), "sub shape mismatch");
        let v = zip_map(self.value(a), self.value(b), |x, y| x - y);
        self.push(self.shape(a), v, Op::Sub(a, b))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert_eq!(self.shape(a), self.shape(b), "mul shape mismatch");
        let v = zip_map(self.value(a), self.value(b), |x, y| x * y);
        self.push(self.shape(a), v, Op::Mul(a, b))
    }

    pub fn scale(&mut self, a: NodeId, c: S) -> NodeId {
        let v = self.value(a).iter().map(|&x| x * c).collect();
        self.push(self.shape(a), v, Op::Scale(a, c))
    }

    // ---- nonlinearities --------------------------------------------------

    pub fn relu(&mut self, a: NodeId) -> NodeId {
        let v = self
            .value(a)
            .iter()
            .map(|&x| if x > S::zero() { x } else { S::zero() })
            .collect();
        self.push(self.shape(a), v, Op::Relu(a))
    }

    pub fn sigmoid(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).iter().map(|&x| kernels::sigmoid(x)).collect();
        self.push(self.shape(a), v, Op::Sigmoid(a))
    }

    pub fn tanh(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).iter().map(|&x| x.tanh()).collect();
        self.push(self.shape(a), v, Op::Tanh(a))
    }

    // ---- softmax family --------------------------------------------------

    pub fn log_softmax_rows(&mut self, a: NodeId) -> NodeId {
        let [m, n] = self.shape(a);
        let av = self.value(a);
        let mut out = Vec::with_capacity(m * n);
        for r in 0..m {
            out.extend(kernels::log_softmax(&av[r * n..(r + 1) * n]));
        }
        self.push([m, n], out, Op::LogSoftmaxRows(a))
    }

    pub fn softmax_rows(&mut self, a: NodeId) -> NodeId {
        let [m, n] = self.shape(a);
        let av = self.value(a);
        let mut out = Vec::with_capacity(m * n);
        for r in 0..m {
            out.extend(kernels::softmax(&av[r * n..(r + 1) * n]));
        }
        self.push([m, n], out, Op::SoftmaxRows(a))
    }

    // ---- selection and reduction -----------------------------------------

    pub fn gather_cols(&mut self, a: NodeId, idx: &[usize]) -> NodeId {
        let [m, n] = self.shape(a);
        assert_eq!(idx.len(), m, "one index per row");
        let av = self.value(a);
        let mut out = Vec::with_capacity(m);
        for (r, &c) in idx.iter().enumerate() {
            assert!(c < n, "gather index out of range");
            out.push(av[r * n + c]);
        }
        self.push([m, 1], out, Op::GatherCols(a, idx.to_vec()))
    }

    pub fn sum_rows(&mut self, a: NodeId) -> NodeId {
        let [m, n] = self.shape(a);
        let av = self.value(a);
        let mut out = Vec::with_capacity(m);
        for r in 0..m {
            let mut acc = S::zero();
            for c in 0..n {
                acc += av[r * n + c];
            }
            out.push(acc);
        }
        self.push([m, 1], out, Op::SumRows(a))
    }

    /// Weighted sum of a column vector against constant weights.
    pub fn dot(&mut self, a: NodeId, weights: &[S]) -> NodeId {
        let [m, n] = self.shape(a);
        assert_eq!(n, 1, "dot expects a column vector");
        assert_eq!(weights.len(), m, "weight length mismatch");
        let av = self.value(a);
        let mut acc = S::zero();
        for r in 0..m {
            acc += av[r] * weights[r];
        }
        self.push([1, 1], vec![acc], Op::Dot(a, weights.to_vec()))
    }

    pub fn mean_all(&mut self, a: NodeId) -> NodeId {
        let av = self.value(a);
        let n = av.len();
        let mut acc = S::zero();
        for &x in av {
            acc += x;
        }
        let v = acc / S::from_f64_lossy(n as f64);
        self.push([1, 1], vec![v], Op::MeanAll(a))
    }

    pub fn sum_all(&mut self, a: NodeId) -> NodeId {
        let av = self.value(a);
        let mut acc = S::zero();
        for &x in av {
            acc += x;
        }
        self.push([1, 1], vec![acc], Op::SumAll(a))
    }

    // ---- backward ---------------------------------------------------------

    /// Reverse pass from a scalar loss node. Parameter gradients are
    /// accumulated into `store`; calling this twice without zeroing the store
    /// doubles them.
    pub fn backward(&self, loss: NodeId, store: &mut ParamStoreBase<S>) -> Result<(), AdError> {
        if self.nodes[loss.0].shape != [1, 1] {
            return Err(AdError::contract(
                "backward",
                format!(
                    "loss must be scalar, got shape {:?}",
                    self.nodes[loss.0].shape
                ),
            ));
        }
        if !self.nodes[loss.0].value[0].is_finite() {
            return Err(AdError::NonFinite { op: "backward" });
        }

        let mut grads: Vec<Vec<S>> = self
            .nodes
            .iter()
            .map(|n| vec![S::zero(); n.value.len()])
            .collect();
        grads[loss.0][0] = S::one();

        // Inputs always precede their consumers, so a single reverse sweep
        // visits every node after all of its downstream gradient is in place.
        for i in (0..self.nodes.len()).rev() {
            let g = std::mem::take(&mut grads[i]);
            if g.iter().all(|&x| x == S::zero()) {
                continue;
            }
            let node = &self.nodes[i];
            let [m, n] = node.shape;
            match &node.op {
                Op::Constant => {}
                Op::Param(pid) => {
                    let dst = store.value_mut(*pid).grad_mut();
                    for (d, &s) in dst.iter_mut().zip(g.iter()) {
                        if !s.is_finite() {
                            return Err(AdError::NonFinite { op: "backward" });
                        }
                        *d += s;
                    }
                }
                Op::Matmul(a, b) => {
                    let k = self.nodes[a.0].shape[1];
                    let (av, bv) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
                    kernels::matmul_grad_a(&g, bv, m, k, n, &mut grads[a.0]);
                    kernels::matmul_grad_b(av, &g, m, k, n, &mut grads[b.0]);
                }
                Op::Add(a, b) => {
                    accumulate(&mut grads[a.0], &g);
                    accumulate(&mut grads[b.0], &g);
                }
                Op::AddRow(a, b) => {
                    accumulate(&mut grads[a.0], &g);
                    let bg = &mut grads[b.0];
                    for r in 0..m {
                        for c in 0..n {
                            bg[c] += g[r * n + c];
                        }
                    }
                }
                Op::Sub(a, b) => {
                    accumulate(&mut grads[a.0], &g);
                    for (dst, &src) in grads[b.0].iter_mut().zip(g.iter()) {
                        *dst -= src;
                    }
                }
                Op::Mul(a, b) => {
                    if a.0 == b.0 {
                        let two = S::from_f64_lossy(2.0);
                        let av = &self.nodes[a.0].value;
                        for ((dst, &src), &x) in
                            grads[a.0].iter_mut().zip(g.iter()).zip(av.iter())
                        {
                            *dst += two * src * x;
                        }
                    } else {
                        let bv = &self.nodes[b.0].value;
                        for ((dst, &src), &y) in
                            grads[a.0].iter_mut().zip(g.iter()).zip(bv.iter())
                        {
                            *dst += src * y;
                        }
                        let av = &self.nodes[a.0].value;
                        for ((dst, &src), &x) in
                            grads[b.0].iter_mut().zip(g.iter()).zip(av.iter())
                        {
                            *dst += src * x;
                        }
                    }
                }
                Op::Scale(a, c) => {
                    for (dst, &src) in grads[a.0].iter_mut().zip(g.iter()) {
                        *dst += src * *c;
                    }
                }
                Op::Relu(a) => {
                    let av = &self.nodes[a.0].value;
                    for ((dst, &src), &x) in grads[a.0].iter_mut().zip(g.iter()).zip(av.iter()) {
                        if x > S::zero() {
                            *dst += src;
                        }
                    }
                }
                Op::Sigmoid(a) => {
                    for ((dst, &src), &y) in
                        grads[a.0].iter_mut().zip(g.iter()).zip(node.value.iter())
                    {
                        *dst += src * y * (S::one() - y);
                    }
                }
                Op::Tanh(a) => {
                    for ((dst, &src), &y) in
                        grads[a.0].iter_mut().zip(g.iter()).zip(node.value.iter())
                    {
                        *dst += src * (S::one() - y * y);
                    }
                }
                Op::LogSoftmaxRows(a) => {
                    // dx = g - softmax(x) * sum(g) per row; softmax = exp(value).
                    let ag = &mut grads[a.0];
                    for r in 0..m {
                        let mut gsum = S::zero();
                        for c in 0..n {
                            gsum += g[r * n + c];
                        }
                        for c in 0..n {
                            let p = node.value[r * n + c].exp();
                            ag[r * n + c] += g[r * n + c] - p * gsum;
                        }
                    }
                }
                Op::SoftmaxRows(a) => {
                    // dx_j = p_j * (g_j - sum_k g_k p_k) per row.
                    let ag = &mut grads[a.0];
                    for r in 0..m {
                        let mut dotgp = S::zero();
                        for c in 0..n {
                            dotgp += g[r * n + c] * node.value[r * n + c];
                        }
                        for c in 0..n {
                            let p = node.value[r * n + c];
                            ag[r * n + c] += p * (g[r * n + c] - dotgp);
                        }
                    }
                }
                Op::GatherCols(a, idx) => {
                    let cols = self.nodes[a.0].shape[1];
                    let ag = &mut grads[a.0];
                    for (r, &c) in idx.iter().enumerate() {
                        ag[r * cols + c] += g[r];
                    }
                }
                Op::SumRows(a) => {
                    let cols = self.nodes[a.0].shape[1];
                    let ag = &mut grads[a.0];
                    for r in 0..m {
                        for c in 0..cols {
                            ag[r * cols + c] += g[r];
                        }
                    }
                }
                Op::Dot(a, w) => {
                    let ag = &mut grads[a.0];
                    for (r, &wr) in w.iter().enumerate() {
                        ag[r] += g[0] * wr;
                    }
                }
                Op::MeanAll(a) => {
                    let count = S::from_f64_lossy(self.nodes[a.0].value.len() as f64);
                    let share = g[0] / count;
                    for dst in grads[a.0].iter_mut() {
                        *dst += share;
                    }
                }
                Op::SumAll(a) => {
                    for dst in grads[a.0].iter_mut() {
                        *dst += g[0];
                    }
                }
            }
        }
        Ok(())
    }
}

fn zip_map<S: Scalar>(a: &[S], b: &[S], f: impl Fn(S, S) -> S) -> Vec<S> {
    a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect()
}

fn accumulate<S: Scalar>(dst: &mut [S], src: &[S]) {
    for (d, &s) in dst.iter_mut().zip(src.iter()) {
        *d += s;
    }
}

/// Shared dense kernels, also used by the graph-free inference paths so the
/// two never diverge numerically.
pub mod kernels {
    use crate::scalar::Scalar;

    /// `out += a @ b` with `a: [m,k]`, `b: [k,n]`. `out` must hold `m*n`.
    pub fn matmul<S: Scalar>(a: &[S], b: &[S], m: usize, k: usize, n: usize, out: &mut [S]) {
        debug_assert_eq!(a.len(), m * k);
        debug_assert_eq!(b.len(), k * n);
        debug_assert_eq!(out.len(), m * n);
        for i in 0..m {
            let arow = &a[i * k..(i + 1) * k];
            let orow = &mut out[i * n..(i + 1) * n];
            for (p, &av) in arow.iter().enumerate() {
                let brow = &b[p * n..(p + 1) * n];
                for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                    *o += av * bv;
                }
            }
        }
    }

    /// `da += dc @ b^T`
    pub fn matmul_grad_a<S: Scalar>(dc: &[S], b: &[S], m: usize, k: usize, n: usize, da: &mut [S]) {
        for i in 0..m {
            let crow = &dc[i * n..(i + 1) * n];
            let arow = &mut da[i * k..(i + 1) * k];
            for (p, dst) in arow.iter_mut().enumerate() {
                let brow = &b[p * n..(p + 1) * n];
                let mut acc = S::zero();
                for (&cv, &bv) in crow.iter().zip(brow.iter()) {
                    acc += cv * bv;
                }
                *dst += acc;
            }
        }
    }

    /// `db += a^T @ dc`
    pub fn matmul_grad_b<S: Scalar>(a: &[S], dc: &[S], m: usize, k: usize, n: usize, db: &mut [S]) {
        for i in 0..m {
            let arow = &a[i * k..(i + 1) * k];
            let crow = &dc[i * n..(i + 1) * n];
            for (p, &av) in arow.iter().enumerate() {
                let brow = &mut db[p * n..(p + 1) * n];
                for (dst, &cv) in brow.iter_mut().zip(crow.iter()) {
                    *dst += av * cv;
                }
            }
        }
    }

    pub fn sigmoid<S: Scalar>(x: S) -> S {
        if x >= S::zero() {
            S::one() / (S::one() + (-x).exp())
        } else {
            let e = x.exp();
            e / (S::one() + e)
        }
    }

    /// Max-subtracted softmax of one row.
    pub fn softmax<S: Scalar>(row: &[S]) -> Vec<S> {
        let mut m = row[0];
        for &x in row {
            if x > m {
                m = x;
            }
        }
        let mut out: Vec<S> = row.iter().map(|&x| (x - m).exp()).collect();
        let mut z = S::zero();
        for &e in &out {
            z += e;
        }
        for e in &mut out {
            *e = *e / z;
        }
        out
    }

    pub fn log_softmax<S: Scalar>(row: &[S]) -> Vec<S> {
        let mut m = row[0];
        for &x in row {
            if x > m {
                m = x;
            }
        }
        let mut z = S::zero();
        for &x in row {
            z += (x - m).exp();
        }
        let lz = z.ln();
        row.iter().map(|&x| x - m - lz).collect()
    }

    pub fn relu_inplace<S: Scalar>(xs: &mut [S]) {
        for x in xs {
            if *x < S::zero() {
                *x = S::zero();
            }
        }
    }
}
