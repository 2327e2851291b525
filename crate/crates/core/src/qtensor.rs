//! Constant spinor tensors: the q-antisymmetric symbol, the R-matrix, its
//! projectors and the SU_q(2) metric.
//!
//! Convention: `eps_12 = s`, `eps_21 = -1/s`, `eps^21 = 1/s`, `eps^12 = -s`.
//! Four-index tensors `T^{ik}_{lm}` are 4x4 matrices with row `(i,k)` and
//! column `(l,m)`, both in the order 11, 12, 21, 22.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::qscalar::{QScalar, Rational};
use crate::report::{check, CheckResult};

/// Index positions of a tensor entry (each index is 1 or 2).
pub type Idx = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorTensor {
    arity: usize,
    entries: BTreeMap<Idx, QScalar>,
}

#[derive(Serialize)]
struct JsonEntry {
    indices: Idx,
    value: String,
}

impl SpinorTensor {
    pub fn new(arity: usize) -> Self {
        SpinorTensor { arity, entries: BTreeMap::new() }
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[u8]) -> QScalar) -> Self {
        let mut t = SpinorTensor::new(arity);
        for idx in all_indices(arity) {
            let v = f(&idx);
            t.set(&idx, v);
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, idx: &[u8]) -> QScalar {
        assert_eq!(idx.len(), self.arity, "index arity mismatch");
        self.entries.get(idx).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn set(&mut self, idx: &[u8], v: QScalar) {
        assert_eq!(idx.len(), self.arity, "index arity mismatch");
        assert!(idx.iter().all(|&i| i == 1 || i == 2), "spinor index out of range");
        if v.is_zero() {
            self.entries.remove(idx);
        } else {
            self.entries.insert(idx.to_vec(), v);
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Idx, &QScalar)> {
        self.entries.iter()
    }

    pub fn map(&self, f: impl Fn(&QScalar) -> Result<QScalar>) -> Result<SpinorTensor> {
        let mut t = SpinorTensor::new(self.arity);
        for (k, v) in &self.entries {
            t.set(k, f(v)?);
        }
        Ok(t)
    }

    pub fn specialize(&self, s0: &Rational) -> Result<SpinorTensor> {
        self.map(|v| v.specialize(s0))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<JsonEntry> =
            self.entries.iter().map(|(k, v)| JsonEntry { indices: k.clone(), value: v.to_string() }).collect();
        serde_json::to_value(v).expect("tensor serializes")
    }

    /// Four-index tensor as a matrix acting on V (x) V.
    pub fn as_matrix(&self) -> Mat {
        assert_eq!(self.arity, 4);
        Mat::from_fn(4, |r, c| {
            let (i, k) = pair(r);
            let (l, m) = pair(c);
            self.get(&[i, k, l, m])
        })
    }

    pub fn from_matrix(m: &Mat) -> SpinorTensor {
        assert_eq!(m.n, 4);
        SpinorTensor::from_fn(4, |x| m.get(slot(x[0], x[1]), slot(x[2], x[3])))
    }
}

pub fn all_indices(arity: usize) -> Vec<Idx> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|v| {
                [1u8, 2].into_iter().map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// `(i,k) -> 0..4`.
pub fn slot(i: u8, k: u8) -> usize {
    (i as usize - 1) * 2 + (k as usize - 1)
}

fn pair(r: usize) -> (u8, u8) {
    ((r / 2) as u8 + 1, (r % 2) as u8 + 1)
}

fn delta(a: u8, b: u8) -> QScalar {
    if a == b {
        QScalar::one()
    } else {
        QScalar::zero()
    }
}

/// `eps_{ik}(q)` when `lower`, else `eps^{ik}(q)`.
pub fn epsilon(lower: bool, i: u8, k: u8) -> QScalar {
    match (lower, i, k) {
        (true, 1, 2) => QScalar::s(),
        (true, 2, 1) => -QScalar::s_pow(-1),
        (false, 2, 1) => QScalar::s_pow(-1),
        (false, 1, 2) => -QScalar::s(),
        _ => QScalar::zero(),
    }
}

/// `R^{ik}_{lm} = q delta^i_l delta^k_m + eps^{ki} eps_{ml}`.
pub fn r_matrix(i: u8, k: u8, l: u8, m: u8) -> QScalar {
    QScalar::q() * delta(i, l) * delta(k, m) + epsilon(false, k, i) * epsilon(true, m, l)
}

/// Inverse R-matrix `R - lambda I`.
pub fn r_inverse(i: u8, k: u8, l: u8, m: u8) -> QScalar {
    r_matrix(i, k, l, m) - QScalar::lambda() * delta(i, l) * delta(k, m)
}

pub fn r_tensor() -> SpinorTensor {
    SpinorTensor::from_fn(4, |x| r_matrix(x[0], x[1], x[2], x[3]))
}

pub fn r_inverse_tensor() -> SpinorTensor {
    SpinorTensor::from_fn(4, |x| r_inverse(x[0], x[1], x[2], x[3]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `P+ = (R + q^-1 I)/(q + q^-1)`, `P- = (q I - R)/(q + q^-1)`.
pub fn projector(sign: Sign) -> SpinorTensor {
    let norm = (QScalar::q() + QScalar::q_pow(-1)).inv().expect("q + 1/q is nonzero");
    SpinorTensor::from_fn(4, |x| {
        let r = r_matrix(x[0], x[1], x[2], x[3]);
        let id = delta(x[0], x[2]) * delta(x[1], x[3]);
        let v = match sign {
            Sign::Plus => r + QScalar::q_pow(-1) * id,
            Sign::Minus => QScalar::q() * id - r,
        };
        v * &norm
    })
}

/// `D^k_i = -eps_{ji} eps^{jk}`, returned with indices `[k, i]`.
pub fn metric() -> SpinorTensor {
    SpinorTensor::from_fn(2, |x| {
        let (k, i) = (x[0], x[1]);
        -[1u8, 2].iter().map(|&j| epsilon(true, j, i) * epsilon(false, j, k)).fold(QScalar::zero(), |a, b| a + b)
    })
}

/// Inverse metric, indices `[k, i]`.
pub fn metric_inverse() -> SpinorTensor {
    let d = metric();
    SpinorTensor::from_fn(2, |x| if x[0] == x[1] { d.get(x).inv().expect("diagonal metric") } else { QScalar::zero() })
}

/// Dense square matrix over Q(s).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    a: Vec<QScalar>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat { n, a: vec![QScalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, |r, c| delta(r as u8, c as u8))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> QScalar) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                a.push(f(r, c));
            }
        }
        Mat { n, a }
    }

    pub fn get(&self, r: usize, c: usize) -> QScalar {
        self.a[r * self.n + c].clone()
    }

    pub fn set(&mut self, r: usize, c: usize, v: QScalar) {
        self.a[r * self.n + c] = v;
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.n, o.n);
        Mat::from_fn(self.n, |r, c| {
            (0..self.n).fold(QScalar::zero(), |acc, k| {
                let x = &self.a[r * self.n + k];
                if x.is_zero() {
                    acc
                } else {
                    acc + x * &o.a[k * self.n + c]
                }
            })
        })
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.n, |r, c| self.get(r, c) + o.get(r, c))
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.n, |r, c| self.get(r, c) - o.get(r, c))
    }

    pub fn scale(&self, k: &QScalar) -> Mat {
        Mat::from_fn(self.n, |r, c| self.get(r, c) * k)
    }

    /// Kronecker product `self (x) o`.
    pub fn kron(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.n * o.n, |r, c| self.get(r / o.n, c / o.n) * o.get(r % o.n, c % o.n))
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(QScalar::is_zero)
    }

    pub fn specialize(&self, s0: &Rational) -> Result<Mat> {
        let a = self.a.iter().map(|v| v.specialize(s0)).collect::<Result<Vec<_>>>()?;
        Ok(Mat { n: self.n, a })
    }

    /// Rank over the field (Gaussian elimination).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.n {
            let Some(p) = (rank..self.n).find(|&r| !m.get(r, c).is_zero()) else { continue };
            for k in 0..self.n {
                m.a.swap(rank * self.n + k, p * self.n + k);
            }
            let inv = m.get(rank, c).inv().expect("nonzero pivot");
            for r in 0..self.n {
                if r != rank {
                    let f = m.get(r, c) * &inv;
                    if !f.is_zero() {
                        for k in 0..self.n {
                            let v = m.get(r, k) - &f * &m.get(rank, k);
                            m.set(r, k, v);
                        }
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Text listing of the nonzero entries, or `None` for the zero matrix.
    pub fn residual(&self) -> Option<String> {
        let parts: Vec<String> = (0..self.n * self.n)
            .filter(|&k| !self.a[k].is_zero())
            .take(6)
            .map(|k| format!("[{},{}]: {}", k / self.n, k % self.n, self.a[k]))
            .collect();
        if parts.is_empty() {
            None
        } else {
            Some(parts.join("; "))
        }
    }
}

/// The constant tensors used by the identity suite, optionally specialized.
#[derive(Clone, Debug)]
pub struct TensorSet {
    pub r: Mat,
    pub rbar: Mat,
    pub p_plus: Mat,
    pub p_minus: Mat,
    pub q: QScalar,
    pub lambda: QScalar,
    pub eps_lower: Mat,
    pub eps_upper: Mat,
    pub metric: Mat,
}

impl TensorSet {
    pub fn generic() -> Self {
        let eps = |lower: bool| Mat::from_fn(2, |r, c| epsilon(lower, r as u8 + 1, c as u8 + 1));
        let m = metric();
        TensorSet {
            r: r_tensor().as_matrix(),
            rbar: r_inverse_tensor().as_matrix(),
            p_plus: projector(Sign::Plus).as_matrix(),
            p_minus: projector(Sign::Minus).as_matrix(),
            q: QScalar::q(),
            lambda: QScalar::lambda(),
            eps_lower: eps(true),
            eps_upper: eps(false),
            metric: Mat::from_fn(2, |r, c| m.get(&[r as u8 + 1, c as u8 + 1])),
        }
    }

    pub fn specialize(&self, s0: &Rational) -> Result<Self> {
        Ok(TensorSet {
            r: self.r.specialize(s0)?,
            rbar: self.rbar.specialize(s0)?,
            p_plus: self.p_plus.specialize(s0)?,
            p_minus: self.p_minus.specialize(s0)?,
            q: self.q.specialize(s0)?,
            lambda: self.lambda.specialize(s0)?,
            eps_lower: self.eps_lower.specialize(s0)?,
            eps_upper: self.eps_upper.specialize(s0)?,
            metric: self.metric.specialize(s0)?,
        })
    }
}

/// Every constant-tensor identity, as a list of checks.
pub fn verify_tensor_suite(set: &TensorSet) -> Vec<CheckResult> {
    let i4 = Mat::identity(4);
    let i2 = Mat::identity(2);
    let TensorSet { r, rbar, p_plus: pp, p_minus: pm, q, lambda, .. } = set;
    let qinv = q.inv().expect("q is nonzero");
    vec![
        check("tensor.hecke", "R^2 = I + lambda R", || Ok(r.mul(r).sub(&i4.add(&r.scale(lambda))).residual())),
        check("tensor.inverse", "Rbar R = I", || Ok(rbar.mul(r).sub(&i4).residual())),
        check("tensor.inverse-right", "R Rbar = I", || Ok(r.mul(rbar).sub(&i4).residual())),
        check("tensor.rbar", "Rbar = R - lambda I", || Ok(rbar.sub(&r.sub(&i4.scale(lambda))).residual())),
        check("tensor.proj-idem-plus", "P+ P+ = P+", || Ok(pp.mul(pp).sub(pp).residual())),
        check("tensor.proj-idem-minus", "P- P- = P-", || Ok(pm.mul(pm).sub(pm).residual())),
        check("tensor.proj-orth", "P+ P- = P- P+ = 0", || {
            Ok(pp.mul(pm).residual().or_else(|| pm.mul(pp).residual()))
        }),
        check("tensor.proj-complete", "P+ + P- = I", || Ok(pp.add(pm).sub(&i4).residual())),
        check("tensor.proj-rank", "rank P- = 1, rank P+ = 3", || {
            let (a, b) = (pm.rank(), pp.rank());
            Ok(if a == 1 && b == 3 { None } else { Some(format!("rank P- = {a}, rank P+ = {b}")) })
        }),
        check("tensor.spectral", "R = q P+ - q^-1 P-", || {
            Ok(r.sub(&pp.scale(q).sub(&pm.scale(&qinv))).residual())
        }),
        check("tensor.eps-contract", "eps_{ik} eps^{kl} = delta_i^l", || {
            Ok(set.eps_lower.mul(&set.eps_upper).sub(&i2).residual())
        }),
        check("tensor.yang-baxter", "R12 R23 R12 = R23 R12 R23", || {
            let r12 = r.kron(&i2);
            let r23 = i2.kron(r);
            Ok(r12.mul(&r23).mul(&r12).sub(&r23.mul(&r12).mul(&r23)).residual())
        }),
        check("tensor.metric", "D^k_i = -eps_{ji} eps^{jk} = diag(q^-1, q)", || {
            let d = Mat::from_fn(2, |a, b| {
                if a != b {
                    QScalar::zero()
                } else if a == 0 {
                    qinv.clone()
                } else {
                    q.clone()
                }
            });
            Ok(set.metric.sub(&d).residual())
        }),
        check("tensor.metric-inverse", "D D^-1 = I", || {
            let dinv = Mat::from_fn(2, |a, b| {
                let v = set.metric.get(a, b);
                if v.is_zero() {
                    v
                } else {
                    v.inv().expect("nonzero")
                }
            });
            Ok(set.metric.mul(&dinv).sub(&i2).residual())
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(true, 1, 2), QScalar::s());
        assert_eq!(epsilon(true, 1, 1), QScalar::zero());
        assert_eq!(epsilon(false, 2, 1), QScalar::s_pow(-1));
    }

    #[test]
    fn r_matrix_entries() {
        assert_eq!(r_matrix(1, 1, 1, 1), QScalar::q());
        assert_eq!(r_matrix(2, 2, 2, 2), QScalar::q());
        assert_eq!(r_matrix(1, 2, 1, 2), QScalar::lambda());
        assert_eq!(r_matrix(2, 1, 1, 2), QScalar::one());
        assert_eq!(r_matrix(1, 2, 2, 1), QScalar::one());
        assert_eq!(r_matrix(2, 1, 2, 1), QScalar::zero());
    }

    #[test]
    fn minus_projector_factorizes() {
        let pm = projector(Sign::Minus);
        let norm = (QScalar::q() + QScalar::q_pow(-1)).inv().unwrap();
        for x in all_indices(4) {
            let expect = -(epsilon(false, x[1], x[0]) * epsilon(true, x[3], x[2])) * &norm;
            assert_eq!(pm.get(&x), expect);
        }
    }

    #[test]
    fn classical_limit_is_permutation() {
        let one = Rational::from_integer(1.into());
        let r = r_tensor().specialize(&one).unwrap();
        for x in all_indices(4) {
            let perm = x[0] == x[3] && x[1] == x[2];
            assert_eq!(r.get(&x), if perm { QScalar::one() } else { QScalar::zero() });
        }
        let pm = projector(Sign::Minus).as_matrix().specialize(&one).unwrap();
        assert_eq!(pm.rank(), 1);
    }

    #[test]
    fn suite_passes_generic_and_specialized() {
        assert!(verify_tensor_suite(&TensorSet::generic()).iter().all(|c| c.passed()));
        let s3 = TensorSet::generic().specialize(&Rational::from_integer(3.into())).unwrap();
        assert!(verify_tensor_suite(&s3).iter().all(|c| c.passed()));
    }

    #[test]
    fn corrupted_entry_fails_named_identity() {
        let mut set = TensorSet::generic();
        set.r.set(slot(1, 2), slot(1, 2), QScalar::q());
        let res = verify_tensor_suite(&set);
        let hecke = res.iter().find(|c| c.id == "tensor.hecke").unwrap();
        assert!(!hecke.passed());
    }

    #[test]
    fn json_rendering() {
        let v = metric().to_json();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert_eq!(v[0]["indices"], serde_json::json!([1, 1]));
        assert_eq!(v[0]["value"], "s^-2");
    }
}
