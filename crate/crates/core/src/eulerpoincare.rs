//! Finite cochain complexes, their deformations over ℚ(ħ), Euler–Poincaré
//! characteristics, and the bigraded χ table of k[x, y].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hochschild::{hkr_cohomology_dims, window_cohomology_dims, CochainWindow};
use crate::linalg::{bareiss_rank, mat_inverse, mat_mul};
use crate::ncpoly::AlgebraSpec;
use crate::scalars::{Scalar, Var};

pub type Matrix = Vec<Vec<Scalar>>;

fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Scalar::zero(); c]; r]
}

fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(Scalar::is_zero))
}

fn product(a: &Matrix, b: &Matrix, rows: usize, cols: usize) -> Result<Matrix> {
    if a.is_empty() || b.is_empty() || b[0].is_empty() {
        return Ok(zeros(rows, cols));
    }
    mat_mul(a, b)
}

fn rank(m: &Matrix) -> Result<usize> {
    if m.is_empty() || m[0].is_empty() {
        return Ok(0);
    }
    bareiss_rank(m)
}

fn check_shapes(dims: &[usize], maps: &[Matrix]) -> Result<()> {
    if dims.is_empty() || maps.len() + 1 != dims.len() {
        return Err(Error::InvalidParameters(format!("{} spaces need {} maps, got {}", dims.len(), dims.len().saturating_sub(1), maps.len())));
    }
    for (i, m) in maps.iter().enumerate() {
        let ok = m.len() == dims[i + 1] && m.iter().all(|r| r.len() == dims[i]);
        if !ok {
            return Err(Error::InvalidParameters(format!("map {i} must be {}x{}", dims[i + 1], dims[i])));
        }
    }
    Ok(())
}

fn composites_vanish(dims: &[usize], maps: &[Matrix]) -> Result<Option<usize>> {
    for i in 0..maps.len().saturating_sub(1) {
        if !is_zero_matrix(&product(&maps[i + 1], &maps[i], dims[i + 2], dims[i])?) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn cohomology(dims: &[usize], maps: &[Matrix]) -> Result<Vec<usize>> {
    let ranks: Vec<usize> = maps.par_iter().map(rank).collect::<Result<_>>()?;
    Ok((0..dims.len())
        .map(|i| {
            let out = if i < ranks.len() { ranks[i] } else { 0 };
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            dims[i] - out - inc
        })
        .collect())
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// 0 → V⁰ → V¹ → … → Vⁿ → 0 with maps[i]: V^i → V^{i+1} as d_{i+1} × d_i matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl FiniteComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        check_shapes(&dims, &maps)?;
        if let Some(i) = composites_vanish(&dims, &maps)? {
            return Err(Error::NotAComplex(i));
        }
        Ok(FiniteComplex { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn chi_dimensional(&self) -> i64 {
        alternating(&self.dims)
    }

    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        cohomology(&self.dims, &self.maps)
    }

    pub fn chi_homological(&self) -> Result<i64> {
        Ok(alternating(&self.cohomology_dims()?))
    }
}

/// Differentials over ℚ(ħ) specializing to a base complex at ħ = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedComplex {
    base: FiniteComplex,
    maps: Vec<Matrix>,
}

fn substitute(m: &Matrix, value: &Scalar) -> Result<Matrix> {
    m.iter().map(|r| r.iter().map(|e| e.substitute(Var::H, value)).collect()).collect()
}

impl DeformedComplex {
    pub fn new(base: FiniteComplex, maps: Vec<Matrix>) -> Result<Self> {
        check_shapes(&base.dims, &maps)?;
        for (i, m) in maps.iter().enumerate() {
            if substitute(m, &Scalar::zero())? != base.maps[i] {
                return Err(Error::NotADeformation(format!("map {i} does not reduce to the base at h = 0")));
            }
        }
        if let Some(i) = composites_vanish(&base.dims, &maps)? {
            return Err(Error::NotADeformation(format!("maps {} and {} do not compose to zero", i, i + 1)));
        }
        Ok(DeformedComplex { base, maps })
    }

    /// M_i(ħ) = M_i + Σ_k ħ^{k+1} perturbations[k][i].
    pub fn deform(base: &FiniteComplex, perturbations: &[Vec<Matrix>]) -> Result<Self> {
        let h = Scalar::hbar_rational();
        let mut maps = base.maps.clone();
        for (k, layer) in perturbations.iter().enumerate() {
            check_shapes(&base.dims, layer)?;
            let hk = h.pow(k as i64 + 1)?;
            for (m, p) in maps.iter_mut().zip(layer) {
                for (row, prow) in m.iter_mut().zip(p) {
                    for (e, pe) in row.iter_mut().zip(prow) {
                        *e = &*e + &(pe * &hk);
                    }
                }
            }
        }
        Self::new(base.clone(), maps)
    }

    pub fn base(&self) -> &FiniteComplex {
        &self.base
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Cohomology at generic ħ.
    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        cohomology(&self.base.dims, &self.maps)
    }

    pub fn specialize(&self, value: &Scalar) -> Result<FiniteComplex> {
        let maps = self.maps.iter().map(|m| substitute(m, value)).collect::<Result<Vec<_>>>()?;
        FiniteComplex::new(self.base.dims.clone(), maps)
    }

    pub fn invariance_report(&self) -> Result<InvarianceReport> {
        let dims_base = self.base.cohomology_dims()?;
        let dims_deformed = self.cohomology_dims()?;
        let chi_base = alternating(&dims_base);
        let chi_deformed = alternating(&dims_deformed);
        Ok(InvarianceReport {
            chi_dimensional: self.base.chi_dimensional(),
            chi_equal: chi_base == chi_deformed,
            dims_nonincreasing: dims_base.iter().zip(&dims_deformed).all(|(a, b)| b <= a),
            chi_base,
            chi_deformed,
            dims_base,
            dims_deformed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub chi_dimensional: i64,
    pub chi_base: i64,
    pub chi_deformed: i64,
    pub dims_base: Vec<usize>,
    pub dims_deformed: Vec<usize>,
    pub chi_equal: bool,
    pub dims_nonincreasing: bool,
}

/// A complex built from a splitting V^i = B^i ⊕ H^i ⊕ C^i with C^i ≅ B^{i+1},
/// then conjugated by random invertible P_i.
#[derive(Clone, Debug)]
pub struct RandomComplex {
    pub complex: FiniteComplex,
    /// (dim B^i, dim H^i, dim C^i).
    pub split: Vec<(usize, usize, usize)>,
    gauge: Vec<Matrix>,
    gauge_inv: Vec<Matrix>,
}

fn small(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_int(rng.gen_range(-3..=3))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = identity(n);
    let mut u = identity(n);
    for i in 0..n {
        for j in 0..i {
            l[i][j] = small(rng);
            u[j][i] = small(rng);
        }
    }
    if n == 0 {
        return l;
    }
    mat_mul(&l, &u).unwrap()
}

/// (B, H, C) block of V^i mapped by the standard differential: C^i → B^{i+1}.
fn standard_map(from: (usize, usize, usize), to: (usize, usize, usize)) -> Matrix {
    let mut m = zeros(to.0 + to.1 + to.2, from.0 + from.1 + from.2);
    for k in 0..from.2 {
        m[k][from.0 + from.1 + k] = Scalar::one();
    }
    m
}

fn conjugate(p_next: &Matrix, m: &Matrix, p_inv: &Matrix, rows: usize, cols: usize) -> Result<Matrix> {
    let t = product(m, p_inv, rows, cols)?;
    product(p_next, &t, rows, cols)
}

impl RandomComplex {
    pub fn generate(rng: &mut ChaCha8Rng, max_dim: usize, max_len: usize) -> Self {
        let len = rng.gen_range(1..=max_len.max(1));
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
        let mut split = Vec::with_capacity(len);
        let mut incoming = 0;
        for i in 0..len {
            let room = dims[i] - incoming;
            let c = if i + 1 < len { rng.gen_range(0..=room.min(dims[i + 1])) } else { 0 };
            split.push((incoming, room - c, c));
            incoming = c;
        }
        let gauge: Vec<Matrix> = dims.iter().map(|&d| random_invertible(rng, d)).collect();
        let gauge_inv: Vec<Matrix> = gauge.iter().map(|g| if g.is_empty() { vec![] } else { mat_inverse(g).unwrap() }).collect();
        let maps = (0..len - 1)
            .map(|i| conjugate(&gauge[i + 1], &standard_map(split[i], split[i + 1]), &gauge_inv[i], dims[i + 1], dims[i]).unwrap())
            .collect();
        RandomComplex { complex: FiniteComplex::new(dims, maps).unwrap(), split, gauge, gauge_inv }
    }

    /// Expected cohomology: dim H^i of the splitting.
    pub fn expected_dims(&self) -> Vec<usize> {
        self.split.iter().map(|s| s.1).collect()
    }

    /// A deformation with polynomial entries: in the split basis add ħ times
    /// an injection from part of H^i into part of H^{i+1}, the target avoiding
    /// the part of H^{i+1} used as a source; then conjugate by P_i(I + ħN_i)
    /// with N_i strictly lower triangular.
    pub fn random_deformation(&self, rng: &mut ChaCha8Rng) -> Result<DeformedComplex> {
        let h = Scalar::hbar_rational();
        let dims = self.complex.dims().to_vec();
        let len = dims.len();
        let mut sources: Vec<Vec<usize>> = vec![vec![]; len];
        let mut targets: Vec<Vec<usize>> = vec![vec![]; len];
        for i in 0..len.saturating_sub(1) {
            let (b0, h0, _) = self.split[i];
            let (b1, h1, _) = self.split[i + 1];
            let free_src: Vec<usize> = (b0..b0 + h0).filter(|k| !targets[i].contains(k)).collect();
            let n = rng.gen_range(0..=free_src.len().min(h1 / 2 + h1 % 2));
            let tgt: Vec<usize> = (b1 + h1 - n..b1 + h1).collect();
            sources[i] = free_src[..n].to_vec();
            targets[i + 1] = tgt;
        }
        let mut gauge_h = Vec::with_capacity(len);
        let mut gauge_h_inv = Vec::with_capacity(len);
        for (i, &d) in dims.iter().enumerate() {
            let mut n = zeros(d, d);
            for r in 0..d {
                for c in 0..r {
                    n[r][c] = small(rng);
                }
            }
            let mut g = identity(d);
            let mut g_inv = identity(d);
            let mut power = identity(d);
            let mut hk = Scalar::one();
            for k in 1..=d {
                power = product(&power, &n, d, d)?;
                hk = &hk * &h;
                let sign = if k % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
                for r in 0..d {
                    for c in 0..d {
                        if k == 1 {
                            g[r][c] = &g[r][c] + &(&n[r][c] * &h);
                        }
                        g_inv[r][c] = &g_inv[r][c] + &(&(&power[r][c] * &hk) * &sign);
                    }
                }
            }
            gauge_h.push(product(&self.gauge[i], &g, d, d)?);
            gauge_h_inv.push(product(&g_inv, &self.gauge_inv[i], d, d)?);
        }
        let mut maps = Vec::with_capacity(len.saturating_sub(1));
        for i in 0..len.saturating_sub(1) {
            let mut m = standard_map(self.split[i], self.split[i + 1]);
            for (s, t) in sources[i].iter().zip(&targets[i + 1]) {
                m[*t][*s] = h.clone();
            }
            maps.push(conjugate(&gauge_h[i + 1], &m, &gauge_h_inv[i], dims[i + 1], dims[i])?);
        }
        DeformedComplex::new(self.complex.clone(), maps)
    }
}

/// One seeded fuzz case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzRow {
    pub seed: u64,
    pub spaces: Vec<usize>,
    pub dims_base: Vec<usize>,
    pub dims_deformed: Vec<usize>,
    pub chi_dimensional: i64,
    pub chi_homological: i64,
    pub chi_deformed: i64,
    pub chi_equal: bool,
    pub dims_nonincreasing: bool,
    pub split_matches: bool,
    pub specialization_generic: bool,
}

impl FuzzRow {
    pub fn passed(&self) -> bool {
        self.chi_dimensional == self.chi_homological
            && self.chi_equal
            && self.dims_nonincreasing
            && self.split_matches
            && self.specialization_generic
    }
}

pub fn fuzz_case(seed: u64, max_dim: usize, max_len: usize) -> Result<FuzzRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rc = RandomComplex::generate(&mut rng, max_dim, max_len);
    let d = rc.random_deformation(&mut rng)?;
    let rep = d.invariance_report()?;
    let mut specialization_generic = false;
    for _ in 0..=3 {
        let v = Scalar::from_ratio(rng.gen_range(1..=97), rng.gen_range(1..=13));
        match d.specialize(&v) {
            Ok(c) if c.cohomology_dims()? == rep.dims_deformed => {
                specialization_generic = true;
                break;
            }
            Ok(_) | Err(Error::PoleAtSpecialization(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(FuzzRow {
        seed,
        spaces: rc.complex.dims().to_vec(),
        split_matches: rep.dims_base == rc.expected_dims(),
        chi_dimensional: rc.complex.chi_dimensional(),
        chi_homological: rep.chi_base,
        chi_deformed: rep.chi_deformed,
        chi_equal: rep.chi_equal,
        dims_nonincreasing: rep.dims_nonincreasing,
        dims_base: rep.dims_base,
        dims_deformed: rep.dims_deformed,
        specialization_generic,
    })
}

/// `count` cases with seeds seed, seed+1, …; parallel, order preserved.
pub fn ep_fuzz(count: usize, max_dim: usize, max_len: usize, seed: u64) -> Result<Vec<FuzzRow>> {
    (0..count as u64).into_par_iter().map(|i| fuzz_case(seed.wrapping_add(i), max_dim, max_len)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiEntry {
    pub r: i64,
    pub s: i64,
    pub chi: i64,
    /// χ from exact window ranks in arities 0..=3.
    pub window_chi: i64,
}

/// χ_{r,s} of k[x, y] from the closed form, next to the window computation.
/// Below (−1, −1) there is no cohomology.
pub fn chi_bidegree_table(rs: std::ops::RangeInclusive<i64>, ss: std::ops::RangeInclusive<i64>) -> Result<Vec<ChiEntry>> {
    let cells: Vec<(i64, i64)> = rs.flat_map(|r| ss.clone().map(move |s| (r, s))).collect();
    let alg = AlgebraSpec::polynomial();
    cells
        .par_iter()
        .map(|&(r, s)| {
            let chi = match hkr_cohomology_dims(r, s) {
                Ok((a, b, c)) => a as i64 - b as i64 + c as i64,
                Err(Error::OutOfRange(..)) => 0,
                Err(e) => return Err(e),
            };
            let degree = (r + s + 2).max(0) as u32;
            let mut window_chi = 0;
            for n in 0..=3usize {
                let d = window_cohomology_dims(&alg, &CochainWindow::new(n, (r, s), 2, degree))?.dim as i64;
                window_chi += if n % 2 == 0 { d } else { -d };
            }
            Ok(ChiEntry { r, s, chi, window_chi })
        })
        .collect()
}
