use rand::Rng;

use crate::error::AdError;
use crate::graph::{kernels, GraphBase, NodeId};
use crate::scalar::Scalar;
use crate::store::{ParamId, ParamStoreBase};
use crate::tensor::TensorBase;

/// Which actor architecture a network uses. Matrix games and LBF use the
/// two-layer MLP; Boulder Push uses a GRU followed by a linear head.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetArch {
    Mlp,
    GruThenLinear,
}

fn standard_normal<S: Scalar, R: Rng>(rng: &mut R) -> S {
    // Box-Muller; the (0,1] shift keeps the log argument positive.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    S::from_f64_lossy(z)
}

/// Orthogonal weight initialisation (rows x cols), scaled by `gain`.
pub fn orthogonal_init<S: Scalar, R: Rng>(
    rows: usize,
    cols: usize,
    gain: f64,
    rng: &mut R,
) -> TensorBase<S> {
    let transpose = rows < cols;
    let (m, n) = if transpose { (cols, rows) } else { (rows, cols) };
    // Column-orthonormalise an m x n Gaussian draw (m >= n) with modified
    // Gram-Schmidt.
    let mut a = vec![S::zero(); m * n];
    for v in a.iter_mut() {
        *v = standard_normal(rng);
    }
    for j in 0..n {
        for i in 0..j {
            let mut proj = S::zero();
            for r in 0..m {
                proj += a[r * n + i] * a[r * n + j];
            }
            for r in 0..m {
                let ai = a[r * n + i];
                a[r * n + j] = a[r * n + j] - proj * ai;
            }
        }
        let mut norm = S::zero();
        for r in 0..m {
            norm += a[r * n + j] * a[r * n + j];
        }
        let norm = norm.sqrt();
        for r in 0..m {
            a[r * n + j] = a[r * n + j] / norm;
        }
    }
    let g = S::from_f64_lossy(gain);
    let mut out = vec![S::zero(); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let v = if transpose { a[c * rows + r] } else { a[r * n + c] };
            out[r * cols + c] = v * g;
        }
    }
    TensorBase::new(vec![rows, cols], out)
}

/// Two fully connected layers: ReLU hidden, linear output.
#[derive(Clone, Debug)]
pub struct MlpParams {
    pub w1: ParamId,
    pub b1: ParamId,
    pub w2: ParamId,
    pub b2: ParamId,
    pub in_dim: usize,
    pub hidden_dim: usize,
    pub out_dim: usize,
}

impl MlpParams {
    /// Orthogonal weights (sqrt(2) gain on the ReLU layer, `out_gain` on the
    /// head), zero biases. Policy heads pass a small `out_gain` so the
    /// initial policy is near-uniform.
    pub fn init<S: Scalar, R: Rng>(
        store: &mut ParamStoreBase<S>,
        prefix: &str,
        in_dim: usize,
        hidden_dim: usize,
        out_dim: usize,
        out_gain: f64,
        rng: &mut R,
    ) -> Self {
        let w1 = store.add(
            format!("{prefix}/w1"),
            orthogonal_init(in_dim, hidden_dim, std::f64::consts::SQRT_2, rng),
        );
        let b1 = store.add(format!("{prefix}/b1"), TensorBase::zeros(1, hidden_dim));
        let w2 = store.add(
            format!("{prefix}/w2"),
            orthogonal_init(hidden_dim, out_dim, out_gain, rng),
        );
        let b2 = store.add(format!("{prefix}/b2"), TensorBase::zeros(1, out_dim));
        MlpParams {
            w1,
            b1,
            w2,
            b2,
            in_dim,
            hidden_dim,
            out_dim,
        }
    }

    pub fn forward<S: Scalar>(
        &self,
        g: &mut GraphBase<S>,
        store: &ParamStoreBase<S>,
        x: NodeId,
    ) -> Result<NodeId, AdError> {
        let [_, cols] = g.shape(x);
        if cols != self.in_dim {
            return Err(AdError::dimension(
                "forward_mlp",
                format!("input width {cols} != expected {}", self.in_dim),
            ));
        }
        let w1 = g.param(store, self.w1);
        let b1 = g.param(store, self.b1);
        let w2 = g.param(store, self.w2);
        let b2 = g.param(store, self.b2);
        let z1 = g.matmul(x, w1);
        let z1 = g.add_row(z1, b1);
        let h = g.relu(z1);
        let z2 = g.matmul(h, w2);
        Ok(g.add_row(z2, b2))
    }

    /// Graph-free forward over `rows` stacked inputs.
    pub fn forward_plain<S: Scalar>(
        &self,
        store: &ParamStoreBase<S>,
        x: &[S],
        rows: usize,
    ) -> Vec<S> {
        assert_eq!(x.len(), rows * self.in_dim, "forward_plain input shape");
        let w1 = store.value(self.w1).data();
        let b1 = store.value(self.b1).data();
        let w2 = store.value(self.w2).data();
        let b2 = store.value(self.b2).data();
        let mut h = vec![S::zero(); rows * self.hidden_dim];
        kernels::matmul(x, w1, rows, self.in_dim, self.hidden_dim, &mut h);
        for r in 0..rows {
            for c in 0..self.hidden_dim {
                h[r * self.hidden_dim + c] += b1[c];
            }
        }
        kernels::relu_inplace(&mut h);
        let mut y = vec![S::zero(); rows * self.out_dim];
        kernels::matmul(&h, w2, rows, self.hidden_dim, self.out_dim, &mut y);
        for r in 0..rows {
            for c in 0..self.out_dim {
                y[r * self.out_dim + c] += b2[c];
            }
        }
        y
    }
}

/// GRU cell plus a linear output head.
#[derive(Clone, Debug)]
pub struct GruParams {
    pub wz: ParamId,
    pub uz: ParamId,
    pub bz: ParamId,
    pub wr: ParamId,
    pub ur: ParamId,
    pub br: ParamId,
    pub wc: ParamId,
    pub uc: ParamId,
    pub bc: ParamId,
    pub wo: ParamId,
    pub bo: ParamId,
    pub in_dim: usize,
    pub hidden_dim: usize,
    pub out_dim: usize,
}

impl GruParams {
    pub fn init<S: Scalar, R: Rng>(
        store: &mut ParamStoreBase<S>,
        prefix: &str,
        in_dim: usize,
        hidden_dim: usize,
        out_dim: usize,
        out_gain: f64,
        rng: &mut R,
    ) -> Self {
        let gate = |store: &mut ParamStoreBase<S>, name: &str, rng: &mut R| {
            let w = store.add(
                format!("{prefix}/w{name}"),
                orthogonal_init(in_dim, hidden_dim, 1.0, rng),
            );
            let u = store.add(
                format!("{prefix}/u{name}"),
                orthogonal_init(hidden_dim, hidden_dim, 1.0, rng),
            );
            let b = store.add(format!("{prefix}/b{name}"), TensorBase::zeros(1, hidden_dim));
            (w, u, b)
        };
        let (wz, uz, bz) = gate(store, "z", rng);
        let (wr, ur, br) = gate(store, "r", rng);
        let (wc, uc, bc) = gate(store, "c", rng);
        let wo = store.add(
            format!("{prefix}/wo"),
            orthogonal_init(hidden_dim, out_dim, out_gain, rng),
        );
        let bo = store.add(format!("{prefix}/bo"), TensorBase::zeros(1, out_dim));
        GruParams {
            wz,
            uz,
            bz,
            wr,
            ur,
            br,
            wc,
            uc,
            bc,
            wo,
            bo,
            in_dim,
            hidden_dim,
            out_dim,
        }
    }

    /// One recurrent step: update gate, reset gate, candidate, convex blend.
    pub fn step<S: Scalar>(
        &self,
        g: &mut GraphBase<S>,
        store: &ParamStoreBase<S>,
        x: NodeId,
        h: NodeId,
    ) -> Result<NodeId, AdError> {
        let [xr, xc] = g.shape(x);
        let [hr, hc] = g.shape(h);
        if xc != self.in_dim || hc != self.hidden_dim || xr != hr {
            return Err(AdError::dimension(
                "gru_step",
                format!(
                    "input [{xr},{xc}] hidden [{hr},{hc}] vs expected in {} hidden {}",
                    self.in_dim, self.hidden_dim
                ),
            ));
        }
        let gate = |g: &mut GraphBase<S>, w, u, b, x, h| {
            let wx = g.param(store, w);
            let uh = g.param(store, u);
            let bb = g.param(store, b);
            let a = g.matmul(x, wx);
            let c = g.matmul(h, uh);
            let s = g.add(a, c);
            g.add_row(s, bb)
        };
        let z_pre = gate(g, self.wz, self.uz, self.bz, x, h);
        let z = g.sigmoid(z_pre);
        let r_pre = gate(g, self.wr, self.ur, self.br, x, h);
        let r = g.sigmoid(r_pre);
        let rh = g.mul(r, h);
        let c_pre = gate(g, self.wc, self.uc, self.bc, x, rh);
        let cand = g.tanh(c_pre);
        // h' = (1 - z) * h + z * c
        let zh = g.mul(z, h);
        let keep = g.sub(h, zh);
        let zc = g.mul(z, cand);
        Ok(g.add(keep, zc))
    }

    pub fn head<S: Scalar>(
        &self,
        g: &mut GraphBase<S>,
        store: &ParamStoreBase<S>,
        h: NodeId,
    ) -> NodeId {
        let wo = g.param(store, self.wo);
        let bo = g.param(store, self.bo);
        let z = g.matmul(h, wo);
        g.add_row(z, bo)
    }

    /// Graph-free recurrent step over `rows` stacked (input, hidden) pairs.
    pub fn step_plain<S: Scalar>(
        &self,
        store: &ParamStoreBase<S>,
        x: &[S],
        h: &[S],
        rows: usize,
    ) -> Vec<S> {
        let hd = self.hidden_dim;
        assert_eq!(x.len(), rows * self.in_dim);
        assert_eq!(h.len(), rows * hd);
        let lin = |w: ParamId, u: ParamId, b: ParamId, hin: &[S]| {
            let mut out = vec![S::zero(); rows * hd];
            kernels::matmul(x, store.value(w).data(), rows, self.in_dim, hd, &mut out);
            kernels::matmul(hin, store.value(u).data(), rows, hd, hd, &mut out);
            let bv = store.value(b).data();
            for r in 0..rows {
                for c in 0..hd {
                    out[r * hd + c] += bv[c];
                }
            }
            out
        };
        let mut z = lin(self.wz, self.uz, self.bz, h);
        for v in z.iter_mut() {
            *v = kernels::sigmoid(*v);
        }
        let mut r = lin(self.wr, self.ur, self.br, h);
        for v in r.iter_mut() {
            *v = kernels::sigmoid(*v);
        }
        let rh: Vec<S> = r.iter().zip(h.iter()).map(|(&a, &b)| a * b).collect();
        let mut cand = lin(self.wc, self.uc, self.bc, &rh);
        for v in cand.iter_mut() {
            *v = v.tanh();
        }
        let mut out = vec![S::zero(); rows * hd];
        for i in 0..rows * hd {
            out[i] = (S::one() - z[i]) * h[i] + z[i] * cand[i];
        }
        out
    }

    pub fn head_plain<S: Scalar>(&self, store: &ParamStoreBase<S>, h: &[S], rows: usize) -> Vec<S> {
        let mut y = vec![S::zero(); rows * self.out_dim];
        kernels::matmul(
            h,
            store.value(self.wo).data(),
            rows,
            self.hidden_dim,
            self.out_dim,
            &mut y,
        );
        let bv = store.value(self.bo).data();
        for r in 0..rows {
            for c in 0..self.out_dim {
                y[r * self.out_dim + c] += bv[c];
            }
        }
        y
    }
}
