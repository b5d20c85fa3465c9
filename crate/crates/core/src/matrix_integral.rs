//! Closed determinant forms of the HCIZ integral and of the
//! linear-over-linear weighted integral, and the τ-series they equal when
//! the flow variables are trace invariants of `A = diag(a)`, `B = diag(b)`.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::algebra::rational::to_f64;
use crate::algebra::PQSeries;
use crate::error::{HurwitzError, Result};
use crate::symmetric::partition::Partition;
use crate::symmetric::CharTables;

/// Eigenvalues of a pair of diagonal `n × n` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SpectralPair {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(HurwitzError::Dimension(format!(
                "need two nonempty spectra of equal size, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(Self { n: a.len(), a, b })
    }

    pub fn swapped(&self) -> Self {
        Self {
            n: self.n,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// `t_i = tr(A^i)/i` and `s_i = tr(B^i)/i` for `i = 1..=iMax`, at index `i - 1`.
pub fn trace_power_sums(p: &SpectralPair, i_max: usize) -> (Vec<f64>, Vec<f64>) {
    let sums = |x: &[f64]| -> Vec<f64> {
        (1..=i_max)
            .map(|i| x.iter().map(|v| v.powi(i as i32)).sum::<f64>() / i as f64)
            .collect()
    };
    (sums(&p.a), sums(&p.b))
}

/// `p_μ(t) = ∏ μ_i t_{μ_i}` at `t = [A]`, i.e. `∏ tr(A^{μ_i})`.
pub fn power_sum_at(eigs: &[f64], mu: &Partition) -> f64 {
    mu.parts()
        .iter()
        .map(|&k| eigs.iter().map(|v| v.powi(k as i32)).sum::<f64>())
        .product()
}

/// `s_λ([A]) = Σ_μ χ_λ(μ) p_μ([A]) / z_μ`.
pub fn schur_at(eigs: &[f64], lambda: &Partition, tables: &CharTables) -> Result<f64> {
    let table = tables.table(lambda.weight())?;
    let li = table.index_of(lambda).expect("partition of N");
    Ok(table
        .partitions()
        .iter()
        .enumerate()
        .map(|(mi, mu)| {
            let z = mu.z_big().to_f64().unwrap_or(f64::INFINITY);
            table.by_index(li, mi) as f64 * power_sum_at(eigs, mu) / z
        })
        .sum())
}

/// `Δ(x) = ∏_{i<j} (x_j - x_i)`.
fn vandermonde(x: &[f64], name: &str) -> Result<f64> {
    let mut v = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let diff = x[j] - x[i];
            if diff == 0.0 {
                return Err(HurwitzError::Singularity(format!(
                    "{name} has coincident entries {} at positions {i} and {j}",
                    x[i]
                )));
            }
            v *= diff;
        }
    }
    Ok(v)
}

fn superfactorial(n: usize) -> f64 {
    (1..n).map(|k| (1..=k).map(|i| i as f64).product::<f64>()).product()
}

/// `(∏_{k<n} k!) det(e^{γ n a_i b_j}) / ((nγ)^{n(n-1)/2} Δ(a) Δ(b))`.
pub fn hciz_closed(p: &SpectralPair, gamma: f64) -> Result<f64> {
    let n = p.n;
    if n > 1 && gamma == 0.0 {
        return Err(HurwitzError::Singularity("γ = 0 with n > 1".into()));
    }
    let va = vandermonde(&p.a, "a")?;
    let vb = vandermonde(&p.b, "b")?;
    let x = gamma * n as f64;
    let m = DMatrix::from_fn(n, n, |i, j| (x * p.a[i] * p.b[j]).exp());
    let power = x.powi((n * (n - 1) / 2) as i32);
    Ok(superfactorial(n) * m.determinant() / (power * va * vb))
}

/// Rising factorial `(x)_k`.
fn pochhammer(x: f64, k: usize) -> f64 {
    (0..k).map(|i| x + i as f64).product()
}

/// Linear-over-linear weight at `β = -1/(n d_1)`:
/// `∏_{k<n} k!/(1 - n(1 + d_1/c_1))_k · det((1 - z a_i b_j)^{n(1 + d_1/c_1) - 1}) / (z^{n(n-1)/2} Δ(a) Δ(b))`
/// with `z = -γ c_1/d_1`; the power is taken entrywise.
pub fn ho_closed(p: &SpectralPair, c1: f64, d1: f64, gamma: f64) -> Result<f64> {
    let n = p.n;
    if c1 == 0.0 || d1 == 0.0 {
        return Err(HurwitzError::Singularity("c_1 and d_1 must be nonzero".into()));
    }
    let z = -gamma * c1 / d1;
    if n > 1 && z == 0.0 {
        return Err(HurwitzError::Singularity("z = 0 with n > 1".into()));
    }
    let nf = n as f64;
    let exponent = nf * (1.0 + d1 / c1) - 1.0;
    let mut prefactor = 1.0;
    for k in 1..n {
        let poch = pochhammer(1.0 - nf * (1.0 + d1 / c1), k);
        if poch == 0.0 {
            return Err(HurwitzError::Singularity(format!(
                "Pochhammer symbol (1 - n(1 + d_1/c_1))_{k} vanishes"
            )));
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        prefactor *= fact / poch;
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let base = 1.0 - z * p.a[i] * p.b[j];
            if base <= 0.0 {
                return Err(HurwitzError::Domain(format!(
                    "|z a_{i} b_{j}| must stay below 1, got z a b = {}",
                    z * p.a[i] * p.b[j]
                )));
            }
            entries.push(base.powf(exponent));
        }
    }
    let m = DMatrix::from_row_slice(n, n, &entries);
    let va = vandermonde(&p.a, "a")?;
    let vb = vandermonde(&p.b, "b")?;
    Ok(prefactor * m.determinant() / (z.powi((n * (n - 1) / 2) as i32) * va * vb))
}

/// `Σ_{(N,μ,ν)} γ^N · series(c, d, β) · p_μ([A]) p_ν([B])` over the stored keys.
pub fn tau_specialize(
    tau: &PQSeries,
    p: &SpectralPair,
    c: &[f64],
    d: &[f64],
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for (key, series) in tau.entries() {
        let coeff = series.eval_f64(c, d, beta)?;
        acc += gamma.powi(key.n as i32) * coeff * power_sum_at(&p.a, &key.mu) * power_sum_at(&p.b, &key.nu);
    }
    Ok(acc)
}

/// `G(x) = ∏(1 + c_i x) / ∏(1 - d_j x)` at a real point.
fn g_value(c: &[f64], d: &[f64], x: f64) -> Result<f64> {
    let num: f64 = c.iter().map(|ci| 1.0 + ci * x).product();
    let den: f64 = d.iter().map(|dj| 1.0 - dj * x).product();
    if den == 0.0 {
        return Err(HurwitzError::Singularity(format!("G has a pole at {x}")));
    }
    Ok(num / den)
}

/// `r_λ = ∏_{(i,j)∈λ} G((j - i)β)` in closed form.
pub fn content_product(c: &[f64], d: &[f64], beta: f64, lambda: &Partition) -> Result<f64> {
    lambda
        .contents()
        .into_iter()
        .map(|k| g_value(c, d, k as f64 * beta))
        .product()
}

/// `Σ_{N ≤ NMax} γ^N Σ_{λ ⊢ N} r_λ s_λ([A]) s_λ([B])` with closed `r_λ`.
///
/// Schur functions of more than `n` rows vanish on `n` eigenvalues and are
/// skipped, which keeps the sum finite where the content product has poles
/// or the β-series diverges.
pub fn tau_closed(
    p: &SpectralPair,
    c: &[f64],
    d: &[f64],
    beta: f64,
    gamma: f64,
    n_max: usize,
    tables: &CharTables,
) -> Result<f64> {
    let mut acc = 0.0;
    for big_n in 0..=n_max {
        let table = tables.table(big_n)?;
        let mut level = 0.0;
        for lambda in table.partitions().iter().filter(|l| l.len() <= p.n) {
            let r = content_product(c, d, beta, lambda)?;
            level += r * schur_at(&p.a, lambda, tables)? * schur_at(&p.b, lambda, tables)?;
        }
        acc += gamma.powi(big_n as i32) * level;
    }
    Ok(acc)
}

/// Comparison of a closed form against its truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixReport {
    pub n: usize,
    pub gamma: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub n_max: usize,
}

impl MatrixReport {
    pub fn new(n: usize, gamma: f64, lhs: f64, rhs: f64, n_max: usize) -> Self {
        let rel_err = if lhs == rhs {
            0.0
        } else {
            (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
        };
        Self {
            n,
            gamma,
            lhs,
            rhs,
            rel_err,
            n_max,
        }
    }
}

/// HCIZ closed form against the weakly monotone τ-series at `β = -1/(n d_1)`.
pub fn verify_hciz(p: &SpectralPair, gamma: f64, d1: f64, n_max: usize, tables: &CharTables) -> Result<MatrixReport> {
    let lhs = hciz_closed(p, gamma)?;
    let beta = -1.0 / (p.n as f64 * d1);
    let rhs = tau_closed(p, &[], &[d1], beta, gamma, n_max, tables)?;
    Ok(MatrixReport::new(p.n, gamma, lhs, rhs, n_max))
}

/// Linear-over-linear closed form against its τ-series at `β = -1/(n d_1)`.
pub fn verify_ho(
    p: &SpectralPair,
    c1: f64,
    d1: f64,
    gamma: f64,
    n_max: usize,
    tables: &CharTables,
) -> Result<MatrixReport> {
    let lhs = ho_closed(p, c1, d1, gamma)?;
    let beta = -1.0 / (p.n as f64 * d1);
    let rhs = tau_closed(p, &[c1], &[d1], beta, gamma, n_max, tables)?;
    Ok(MatrixReport::new(p.n, gamma, lhs, rhs, n_max))
}

/// Rational parameter lists as floats.
pub fn rationals_to_f64(xs: &[crate::algebra::Rational]) -> Vec<f64> {
    xs.iter().map(to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::WeightGenSpec;
    use crate::tau::tau_table;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn trace_sums() {
        let p = SpectralPair::new(vec![2.0], vec![1.0]).unwrap();
        let (t, _) = trace_power_sums(&p, 4);
        for (i, ti) in t.iter().enumerate() {
            assert!(close(*ti, 2f64.powi(i as i32 + 1) / (i as f64 + 1.0), 1e-15));
        }
        let p = SpectralPair::new(vec![1.0, -1.0], vec![0.0, 1.0]).unwrap();
        let (t, _) = trace_power_sums(&p, 2);
        assert_eq!(t, vec![0.0, 1.0]);
        let p = SpectralPair::new(vec![1.0, 1.0], vec![0.0, 1.0]).unwrap();
        let (t, _) = trace_power_sums(&p, 3);
        assert_eq!(t, vec![2.0, 1.0, 2.0 / 3.0]);
    }

    #[test]
    fn hciz_rank_one() {
        for (a, b, g) in [(0.3, -0.7, 0.05), (1.0, 1.0, 1.0), (-2.0, 0.5, 0.2)] {
            let p = SpectralPair::new(vec![a], vec![b]).unwrap();
            assert!(close(hciz_closed(&p, g).unwrap(), (g * a * b).exp(), 1e-15));
        }
    }

    #[test]
    fn hciz_singularities() {
        let p = SpectralPair::new(vec![0.5, 0.5], vec![0.1, 0.2]).unwrap();
        assert!(matches!(hciz_closed(&p, 0.05), Err(HurwitzError::Singularity(_))));
        let p = SpectralPair::new(vec![0.5, 0.4], vec![0.1, 0.2]).unwrap();
        assert!(matches!(hciz_closed(&p, 0.0), Err(HurwitzError::Singularity(_))));
        assert!(SpectralPair::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn hciz_matches_series() {
        let t = CharTables::up_to(12);
        let p = SpectralPair::new(vec![1.0, 2.0], vec![1.0, 3.0]).unwrap();
        let r = verify_hciz(&p, 0.05, 1.0, 12, &t).unwrap();
        assert!(r.rel_err < 1e-8, "{r:?}");
        let p = SpectralPair::new(vec![-0.4, 0.9], vec![0.25, -1.0]).unwrap();
        let r = verify_hciz(&p, -0.05, 2.5, 12, &t).unwrap();
        assert!(r.rel_err < 1e-8, "{r:?}");
    }

    #[test]
    fn ho_rank_one() {
        let p = SpectralPair::new(vec![0.5], vec![0.3]).unwrap();
        let (c1, d1, g) = (0.7, 1.3, 0.1);
        let z = -g * c1 / d1;
        let expected = (1.0 - z * 0.5 * 0.3f64).powf(d1 / c1);
        assert!(close(ho_closed(&p, c1, d1, g).unwrap(), expected, 1e-14));
        let expected = 1.0 - (-g) * 0.5 * 0.3;
        assert!(close(ho_closed(&p, 1.0, 1.0, g).unwrap(), expected, 1e-14));
    }

    #[test]
    fn ho_matches_series() {
        let t = CharTables::up_to(10);
        let p = SpectralPair::new(vec![0.2, 0.9], vec![-0.5, 0.4]).unwrap();
        let r = verify_ho(&p, 0.6, 1.1, 0.05, 10, &t).unwrap();
        assert!(r.rel_err < 1e-6, "{r:?}");
        let r = verify_ho(&p, -0.4, 0.9, 0.05, 10, &t).unwrap();
        assert!(r.rel_err < 1e-6, "{r:?}");
    }

    #[test]
    fn specialize_small_tables() {
        let g = WeightGenSpec::symbolic(0, 1);
        let t = CharTables::up_to(4);
        let tau = tau_table(&g, 0, 2, &t).unwrap();
        let p = SpectralPair::new(vec![0.3], vec![0.7]).unwrap();
        assert_eq!(tau_specialize(&tau, &p, &[], &[1.0], 0.1, 0.2).unwrap(), 1.0);
        let tau = tau_table(&g, 1, 2, &t).unwrap();
        let v = tau_specialize(&tau, &p, &[], &[1.0], 0.1, 0.2).unwrap();
        assert!(close(v, 1.0 + 0.2 * 0.3 * 0.7, 1e-15));
    }

    #[test]
    fn truncated_series_approaches_closed_sum() {
        // small β: the β-series converges and agrees with the closed content products
        let g = WeightGenSpec::symbolic(1, 1);
        let t = CharTables::up_to(4);
        let tau = tau_table(&g, 4, 8, &t).unwrap();
        let p = SpectralPair::new(vec![0.4, -0.3, 0.8], vec![0.5, 0.1, -0.6]).unwrap();
        let (c, d, beta, gamma) = ([0.7], [1.2], 0.01, 0.3);
        let series = tau_specialize(&tau, &p, &c, &d, beta, gamma).unwrap();
        let closed = tau_closed(&p, &c, &d, beta, gamma, 4, &t).unwrap();
        assert!(close(series, closed, 1e-12), "{series} vs {closed}");
    }

    #[test]
    fn truncation_error_shrinks() {
        let t = CharTables::up_to(10);
        let p = SpectralPair::new(vec![0.5, -0.2], vec![0.3, 0.9]).unwrap();
        let beta = -0.5;
        let vals: Vec<f64> = (0..=10)
            .map(|k| tau_closed(&p, &[], &[1.0], beta, 0.1, k, &t).unwrap())
            .collect();
        let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in diffs.windows(2).skip(1) {
            assert!(w[1] <= w[0] || w[1] < 1e-15, "{diffs:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hciz_symmetries(
            a in proptest::collection::vec(-1.0f64..1.0, 3),
            b in proptest::collection::vec(-1.0f64..1.0, 3),
            gamma in 0.01f64..0.5,
        ) {
            let p = SpectralPair::new(a.clone(), b.clone()).unwrap();
            prop_assume!(hciz_closed(&p, gamma).is_ok());
            let base = hciz_closed(&p, gamma).unwrap();
            let swapped = hciz_closed(&p.swapped(), gamma).unwrap();
            let perm = SpectralPair::new(vec![a[2], a[0], a[1]], vec![b[1], b[0], b[2]]).unwrap();
            let permuted = hciz_closed(&perm, gamma).unwrap();
            prop_assert!(close(base, swapped, 1e-6));
            prop_assert!(close(base, permuted, 1e-6));
        }
    }
}
