//! Quasi-free states: Gibbs densities, Wick's theorem and oracle checks.
//!
//! Generalized operators are A(F) = Σ_k conj(F_k) b_k with
//! b = (a_1, …, a_M, a_1*, …, a_M*). Then a(f) = A(f ⊕ 0),
//! a*(g) = A(0 ⊕ conj g) and A(F)* = A(JF). The two-point function is
//! ρ(A(F)A(G)) = (G, Γ JF).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{expectation, string_label, FockSpace, Ladder, ManyBodyOperator, State};
use crate::linalg::{c, hermitian_function, j_vec, sign_matrix, CMat, CVec, C64, ONE, ZERO};
use crate::onepdm::OnePdm;
use crate::symplectic::BogoliubovMap;

/// Largest truncated probability mass accepted by [`build_density`].
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Stand-in exponent for λ = 0 modes when a dense Gibbs operator is built.
const KERNEL_EXPONENT: f64 = 60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiFreeSpec {
    pub lambdas: Vec<f64>,
    /// Frame in which the state is diagonal.
    pub map: Option<BogoliubovMap>,
    pub displacement: Option<CVec>,
}

impl QuasiFreeSpec {
    pub fn thermal(lambdas: &[f64]) -> Self {
        QuasiFreeSpec {
            lambdas: lambdas.to_vec(),
            map: None,
            displacement: None,
        }
    }

    pub fn with_map(lambdas: &[f64], map: BogoliubovMap) -> Self {
        QuasiFreeSpec {
            lambdas: lambdas.to_vec(),
            map: Some(map),
            displacement: None,
        }
    }

    pub fn modes(&self) -> usize {
        self.lambdas.len()
    }

    fn validate(&self) -> Result<()> {
        if self.lambdas.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return invalid("occupations must be finite and non-negative");
        }
        if let Some(map) = &self.map {
            if map.modes() != self.modes() {
                return invalid("map and occupations have different mode counts");
            }
        }
        Ok(())
    }

    /// Γ = (V*)⁻¹ diag(λ, 1+λ) V⁻¹ = SVS D SV*S.
    pub fn onepdm(&self) -> Result<OnePdm> {
        self.validate()?;
        let base = OnePdm::thermal(&self.lambdas);
        match &self.map {
            None => Ok(base),
            Some(map) => {
                let m = self.modes();
                let s = sign_matrix(m);
                let w = &s * map.full() * &s;
                let g = &w * crate::onepdm::full_gamma(&base) * w.adjoint();
                OnePdm::from_full(&g)
            }
        }
    }
}

/// e_i = ln((1+λ_i)/λ_i); `None` marks λ_i = 0 modes (projection onto
/// their vacuum).
pub fn gibbs_exponents(lambdas: &[f64]) -> Result<Vec<Option<f64>>> {
    lambdas
        .iter()
        .map(|&l| {
            if !(l >= 0.0) {
                invalid(format!("negative occupation {l}"))
            } else if l == 0.0 {
                Ok(None)
            } else {
                Ok(Some(((1.0 + l) / l).ln()))
            }
        })
        .collect()
}

/// Normalized truncated density together with the mass lost to truncation.
#[derive(Debug, Clone)]
pub struct QuasiFreeDensity {
    pub state: State,
    pub tail_mass: f64,
}

/// Probability of an occupation pattern under the product geometric law.
fn gibbs_weight(lambdas: &[f64], occ: &[u32]) -> f64 {
    lambdas
        .iter()
        .zip(occ)
        .map(|(&l, &n)| {
            if l == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                let x = l / (1.0 + l);
                (1.0 - x) * x.powi(n as i32)
            }
        })
        .product()
}

/// Smallest cutoff whose untruncated tail is below `tol`.
pub fn required_cutoff(lambdas: &[f64], tol: f64) -> usize {
    // tail of the total number of independent geometric variables; below
    // a few ulps the complement 1 − kept is rounding noise
    let tol = tol.max(8.0 * f64::EPSILON);
    let mut n = 0;
    loop {
        let space = match FockSpace::new(lambdas.len(), n) {
            Ok(s) => s,
            Err(_) => return n,
        };
        let kept: f64 = space.basis().iter().map(|o| gibbs_weight(lambdas, o)).sum();
        if 1.0 - kept < tol {
            return n;
        }
        n += 1;
    }
}

/// ρ = G / Tr G on the truncated space.
///
/// Without a map G = Π₀ exp(−Σ e_i a_i* a_i) is diagonal. With a map and
/// all λ = 0 the state is the new vacuum of the map; with a map and mixed
/// occupations G is built from the transformed number operators.
pub fn build_density(spec: &QuasiFreeSpec, space: &FockSpace) -> Result<QuasiFreeDensity> {
    spec.validate()?;
    if spec.modes() != space.modes() {
        return invalid("spec and space have different mode counts");
    }
    if spec.displacement.is_some() {
        return invalid("displaced states are handled by the coherent module");
    }
    let identity = spec
        .map
        .as_ref()
        .is_none_or(|m| *m == BogoliubovMap::identity(spec.modes()));
    if identity {
        let p: Vec<f64> = space
            .basis()
            .iter()
            .map(|o| gibbs_weight(&spec.lambdas, o))
            .collect();
        let kept: f64 = p.iter().sum();
        let tail = 1.0 - kept;
        if tail > TAIL_TOLERANCE {
            return Err(Error::Truncation(format!(
                "tail mass {tail:e} at cutoff {}; need cutoff {}",
                space.cutoff(),
                required_cutoff(&spec.lambdas, TAIL_TOLERANCE)
            )));
        }
        let p = p.iter().map(|x| x / kept).collect();
        return Ok(QuasiFreeDensity {
            state: State::Diagonal(p),
            tail_mass: tail.max(0.0),
        });
    }
    let map = spec.map.as_ref().expect("checked above");
    if spec.lambdas.iter().all(|&l| l == 0.0) {
        let (psi, tail) = new_vacuum(map, space)?;
        if tail > TAIL_TOLERANCE {
            return Err(Error::Truncation(format!(
                "new-vacuum tail mass {tail:e} at cutoff {}",
                space.cutoff()
            )));
        }
        return Ok(QuasiFreeDensity {
            state: State::Pure(psi),
            tail_mass: tail,
        });
    }
    rotated_gibbs(spec, map, space)
}

/// Annihilators of the transformed frame: A(V(e_i ⊕ 0)) as ladder sums.
fn frame_annihilators(map: &BogoliubovMap) -> Vec<Vec<(C64, Ladder)>> {
    let m = map.modes();
    let f = map.full();
    (0..m)
        .map(|i| GenOp::new(f.column(i).into_owned()).expand())
        .collect()
}

/// Z = −(U*)⁻¹ Vᵀ so that exp(½ Σ Z_jk a_j* a_k*)|0⟩ is annihilated by
/// every frame annihilator.
pub fn pairing_matrix(map: &BogoliubovMap) -> Result<CMat> {
    let inv = map
        .u()
        .adjoint()
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("U block is singular".into()))?;
    Ok(-(inv * map.v().transpose()))
}

/// The vacuum of the transformed frame,
/// det(1 − Z conj Z)^{1/4} exp(½ Σ Z_jk a_j* a_k*)|0⟩, truncated.
/// Returns the normalized vector and the truncated norm mass.
pub fn new_vacuum(map: &BogoliubovMap, space: &FockSpace) -> Result<(CVec, f64)> {
    let m = map.modes();
    if m != space.modes() {
        return invalid("map and space have different mode counts");
    }
    let z = pairing_matrix(map)?;
    let mut terms = Vec::new();
    for j in 0..m {
        for k in 0..m {
            if z[(j, k)] != ZERO {
                terms.push((z[(j, k)] * 0.5, vec![Ladder::ad(j), Ladder::ad(k)]));
            }
        }
    }
    let space = Arc::new(space.clone());
    let q = ManyBodyOperator::from_terms(space.clone(), &terms)?;
    let mut term = space.vacuum();
    let mut psi = term.clone();
    for n in 1..=space.cutoff() / 2 {
        term = q.apply(&term).unscale(n as f64);
        psi += &term;
    }
    let zz = CMat::identity(m, m) - &z * z.map(|x| x.conj());
    let norm_sq_exact = 1.0 / zz.determinant().norm().sqrt();
    let tail = (1.0 - psi.norm_squared() / norm_sq_exact).max(0.0);
    let norm = psi.norm();
    Ok((psi.unscale(norm), tail))
}

fn rotated_gibbs(spec: &QuasiFreeSpec, map: &BogoliubovMap, space: &FockSpace) -> Result<QuasiFreeDensity> {
    let m = spec.modes();
    let pad = 24;
    let big = Arc::new(FockSpace::new(m, space.cutoff() + pad)?);
    if big.dimension() > 1500 {
        return invalid("mixed states in a rotated frame are limited to small spaces");
    }
    let exps = gibbs_exponents(&spec.lambdas)?;
    let mut terms = Vec::new();
    for (i, ann) in frame_annihilators(map).iter().enumerate() {
        let e = exps[i].unwrap_or(KERNEL_EXPONENT);
        for (cx, x) in ann {
            for (cy, y) in ann {
                terms.push((cx.conj() * cy * e, vec![x.adjoint(), *y]));
            }
        }
    }
    let h = ManyBodyOperator::from_terms(big.clone(), &terms)?.to_dense();
    let g = hermitian_function(&h, |x| (-x).exp());
    let total = g.trace().re;
    let n = space.dimension();
    let inner = g.view((0, 0), (n, n)).into_owned();
    let kept = inner.trace().re;
    let tail = 1.0 - kept / total;
    if tail > TAIL_TOLERANCE {
        return Err(Error::Truncation(format!(
            "rotated Gibbs tail mass {tail:e} at cutoff {}",
            space.cutoff()
        )));
    }
    Ok(QuasiFreeDensity {
        state: State::Mixed(inner.unscale(kept)),
        tail_mass: tail,
    })
}


/// A(F) for a doubled-space coefficient vector F.
#[derive(Debug, Clone, PartialEq)]
pub struct GenOp {
    pub f: CVec,
}

impl GenOp {
    pub fn new(f: CVec) -> Self {
        GenOp { f }
    }

    pub fn from_ladder(l: Ladder, modes: usize) -> Self {
        let mut f = CVec::zeros(2 * modes);
        f[if l.creation { modes + l.mode } else { l.mode }] = ONE;
        GenOp { f }
    }

    pub fn modes(&self) -> usize {
        self.f.len() / 2
    }

    /// A(F)* = A(JF).
    pub fn adjoint(&self) -> Self {
        GenOp { f: j_vec(&self.f) }
    }

    /// Σ conj(F_k) b_k as weighted ladder operators.
    pub fn expand(&self) -> Vec<(C64, Ladder)> {
        let m = self.modes();
        (0..2 * m)
            .filter(|&k| self.f[k] != ZERO)
            .map(|k| {
                let l = if k < m { Ladder::a(k) } else { Ladder::ad(k - m) };
                (self.f[k].conj(), l)
            })
            .collect()
    }
}

pub fn ladders(ops: &[Ladder], modes: usize) -> Vec<GenOp> {
    ops.iter().map(|&l| GenOp::from_ladder(l, modes)).collect()
}

/// ρ(A(F)A(G)) = (G, Γ JF).
pub fn two_point(gamma: &CMat, f: &GenOp, g: &GenOp) -> C64 {
    g.f.dotc(&(gamma * j_vec(&f.f)))
}

/// Wick's theorem: zero for odd degree, otherwise the sum over pairings
/// of products of ordered two-point functions.
pub fn wick_expectation(p: &OnePdm, ops: &[GenOp]) -> Result<C64> {
    let m = p.modes();
    if ops.iter().any(|op| op.f.len() != 2 * m) {
        return invalid("operator dimension does not match the 1-pdm");
    }
    if ops.len() % 2 == 1 {
        return Ok(ZERO);
    }
    let gamma = crate::onepdm::full_gamma(p);
    let k = ops.len();
    let mut table = vec![ZERO; k * k];
    for i in 0..k {
        for j in i + 1..k {
            table[i * k + j] = two_point(&gamma, &ops[i], &ops[j]);
        }
    }
    let mut rest: Vec<usize> = (0..k).collect();
    Ok(pairing_sum(&mut rest, &table, k))
}

/// Pairs the first remaining index with each later one, recursively.
fn pairing_sum(rest: &mut Vec<usize>, table: &[C64], k: usize) -> C64 {
    if rest.is_empty() {
        return ONE;
    }
    let first = rest.remove(0);
    let mut acc = ZERO;
    for pos in 0..rest.len() {
        let partner = rest.remove(pos);
        let t = table[first * k + partner];
        if t != ZERO {
            acc += t * pairing_sum(rest, table, k);
        }
        rest.insert(pos, partner);
    }
    rest.insert(0, first);
    acc
}

/// Number of pairings of 2m elements, (2m − 1)!!.
pub fn pairing_count(k: usize) -> usize {
    if k % 2 == 1 {
        return 0;
    }
    (1..k).step_by(2).product::<usize>().max(1)
}

/// Oracle expectation of a product of generalized operators.
pub fn oracle_expectation(space: &FockSpace, state: &State, ops: &[GenOp]) -> Result<C64> {
    let expanded: Vec<Vec<(C64, Ladder)>> = ops.iter().map(GenOp::expand).collect();
    let mut acc = ZERO;
    let mut choice = vec![0usize; ops.len()];
    if expanded.iter().any(Vec::is_empty) {
        return Ok(ZERO);
    }
    loop {
        let mut coef = ONE;
        let mut string = Vec::with_capacity(ops.len());
        for (slot, &ci) in choice.iter().enumerate() {
            let (w, l) = expanded[slot][ci];
            coef *= w;
            string.push(l);
        }
        acc += coef * expectation(space, state, &string)?;
        // odometer increment
        let mut slot = 0;
        loop {
            if slot == ops.len() {
                return Ok(acc);
            }
            choice[slot] += 1;
            if choice[slot] < expanded[slot].len() {
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WickEntry {
    pub label: String,
    pub wick: [f64; 2],
    pub oracle: [f64; 2],
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WickReport {
    pub entries: Vec<WickEntry>,
    pub worst: f64,
    pub worst_label: String,
    pub tail_mass: f64,
    /// max |⟨a_i* a_j⟩ − δ_ij λ_i| and max |⟨a_i a_j⟩| in the diagonal frame.
    pub number_identity: f64,
    pub pairing_identity: f64,
    pub passed: bool,
}

/// Compares Wick's theorem with the oracle for all ladder strings of
/// degree ≤ `max_degree`.
pub fn verify_quasifree(spec: &QuasiFreeSpec, space: &FockSpace, max_degree: usize) -> Result<WickReport> {
    verify_quasifree_with_tol(spec, space, max_degree, 1e-7)
}

pub fn verify_quasifree_with_tol(
    spec: &QuasiFreeSpec,
    space: &FockSpace,
    max_degree: usize,
    tol: f64,
) -> Result<WickReport> {
    let m = spec.modes();
    if m > 2 {
        return invalid("oracle verification is limited to two modes");
    }
    let density = build_density(spec, space)?;
    let p = spec.onepdm()?;
    let labels: Vec<Ladder> = (0..m).flat_map(|i| [Ladder::a(i), Ladder::ad(i)]).collect();
    let mut entries = Vec::new();
    let mut worst = 0.0;
    let mut worst_label = String::new();
    for degree in 1..=max_degree {
        let count = labels.len().pow(degree as u32);
        for code in 0..count {
            let mut x = code;
            let string: Vec<Ladder> = (0..degree)
                .map(|_| {
                    let l = labels[x % labels.len()];
                    x /= labels.len();
                    l
                })
                .collect();
            let oracle = expectation(space, &density.state, &string)?;
            let wick = wick_expectation(&p, &ladders(&string, m))?;
            let err = (oracle - wick).norm();
            let label = string_label(&string);
            if err > worst {
                worst = err;
                worst_label = label.clone();
            }
            entries.push(WickEntry {
                label,
                wick: [wick.re, wick.im],
                oracle: [oracle.re, oracle.im],
                abs_err: err,
            });
        }
    }
    let (number_identity, pairing_identity) = closed_form_identities(spec, space, &density.state)?;
    Ok(WickReport {
        passed: worst <= tol && number_identity <= tol && pairing_identity <= tol,
        entries,
        worst,
        worst_label,
        tail_mass: density.tail_mass,
        number_identity,
        pairing_identity,
    })
}

/// Tr(a_i* a_j G)/Tr G = δ_ij λ_i and Tr(a_i a_j G) = 0, evaluated in the
/// frame where the state is diagonal.
fn closed_form_identities(spec: &QuasiFreeSpec, space: &FockSpace, state: &State) -> Result<(f64, f64)> {
    let m = spec.modes();
    let frame: Vec<GenOp> = match &spec.map {
        None => (0..m).map(|i| GenOp::from_ladder(Ladder::a(i), m)).collect(),
        Some(map) => {
            let f = map.full();
            (0..m).map(|i| GenOp::new(f.column(i).into_owned())).collect()
        }
    };
    let mut number: f64 = 0.0;
    let mut pairing: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let n = oracle_expectation(space, state, &[frame[i].adjoint(), frame[j].clone()])?;
            let expect = if i == j { spec.lambdas[i] } else { 0.0 };
            number = number.max((n - c(expect)).norm());
            let a = oracle_expectation(space, state, &[frame[i].clone(), frame[j].clone()])?;
            pairing = pairing.max(a.norm());
        }
    }
    Ok((number, pairing))
}

/// Σ over the truncated basis of the unnormalized Gibbs weights, against
/// the closed form Π (1 − e^{−e_i})⁻¹ = Π (1 + λ_i).
pub fn gibbs_trace(lambdas: &[f64], space: &FockSpace) -> Result<(f64, f64)> {
    let exps = gibbs_exponents(lambdas)?;
    let truncated: f64 = space
        .basis()
        .iter()
        .map(|occ| {
            exps.iter()
                .zip(occ)
                .map(|(e, &n)| match e {
                    Some(e) => (-e * n as f64).exp(),
                    None => {
                        if n == 0 {
                            1.0
                        } else {
                            0.0
                        }
                    }
                })
                .product::<f64>()
        })
        .sum();
    let exact = lambdas.iter().map(|l| 1.0 + l).product();
    Ok((truncated, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::onepdm::purity_defect;

    fn one_mode_space(n: usize) -> FockSpace {
        FockSpace::new(1, n).unwrap()
    }

    #[test]
    fn exponents() {
        let e = gibbs_exponents(&[1.0, 0.0, 3.0]).unwrap();
        assert!((e[0].unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(e[1].is_none());
        assert!((e[2].unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!(gibbs_exponents(&[-0.1]).is_err());
    }

    #[test]
    fn vacuum_density() {
        let s = FockSpace::new(2, 3).unwrap();
        let d = build_density(&QuasiFreeSpec::thermal(&[0.0, 0.0]), &s).unwrap();
        match d.state {
            State::Diagonal(p) => {
                assert_eq!(p[0], 1.0);
                assert!(p[1..].iter().all(|&x| x == 0.0));
            }
            _ => panic!("expected diagonal density"),
        }
    }

    #[test]
    fn thermal_moments() {
        let s = one_mode_space(40);
        let d = build_density(&QuasiFreeSpec::thermal(&[1.0]), &s).unwrap();
        let n = expectation(&s, &d.state, &[Ladder::ad(0), Ladder::a(0)]).unwrap();
        assert!((n.re - 1.0).abs() < 1e-9);
        let nn = expectation(&s, &d.state, &[Ladder::ad(0), Ladder::a(0), Ladder::ad(0), Ladder::a(0)]).unwrap();
        assert!((nn.re - 3.0).abs() < 1e-9);
        let p = OnePdm::thermal(&[1.0]);
        let w = wick_expectation(&p, &ladders(&[Ladder::ad(0), Ladder::a(0), Ladder::ad(0), Ladder::a(0)], 1)).unwrap();
        assert!((w.re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_error_names_cutoff() {
        let s = one_mode_space(5);
        match build_density(&QuasiFreeSpec::thermal(&[1.0]), &s) {
            Err(Error::Truncation(msg)) => assert!(msg.contains("need cutoff")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_point_conventions() {
        let l = 0.7;
        let p = OnePdm::thermal(&[l]);
        let g = crate::onepdm::full_gamma(&p);
        let a = GenOp::from_ladder(Ladder::a(0), 1);
        let ad = GenOp::from_ladder(Ladder::ad(0), 1);
        assert!((two_point(&g, &ad, &a) - c(l)).norm() < 1e-15);
        assert!((two_point(&g, &a, &ad) - c(1.0 + l)).norm() < 1e-15);
        let sq = OnePdm::new(CMat::from_element(1, 1, c(1.0)), CMat::from_element(1, 1, c(0.3))).unwrap();
        let gs = crate::onepdm::full_gamma(&sq);
        assert!((two_point(&gs, &a, &a) - c(0.3)).norm() < 1e-15);
        assert!((two_point(&gs, &ad, &ad) - c(0.3)).norm() < 1e-15);
    }

    #[test]
    fn odd_products_vanish() {
        let p = OnePdm::thermal(&[0.5]);
        let ops = ladders(&[Ladder::a(0), Ladder::ad(0), Ladder::a(0)], 1);
        assert_eq!(wick_expectation(&p, &ops).unwrap(), ZERO);
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(pairing_count(2), 1);
        assert_eq!(pairing_count(4), 3);
        assert_eq!(pairing_count(6), 15);
        assert_eq!(pairing_count(0), 1);
    }

    #[test]
    fn verify_thermal_and_vacuum() {
        let s = one_mode_space(60);
        let r = verify_quasifree(&QuasiFreeSpec::thermal(&[0.5]), &s, 4).unwrap();
        assert!(r.passed, "worst {} at {}", r.worst, r.worst_label);
        let r = verify_quasifree(&QuasiFreeSpec::thermal(&[0.0]), &one_mode_space(8), 6).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn new_vacuum_of_squeeze() {
        let r = 0.3;
        let map = BogoliubovMap::squeeze(r);
        let s = one_mode_space(60);
        let (psi, tail) = new_vacuum(&map, &s).unwrap();
        assert!(tail < 1e-12);
        // annihilated by cosh r · a + sinh r · a*
        let st = State::Pure(psi);
        let p = crate::fock::onepdm_of_state(&s, &st).unwrap();
        assert!((p.gamma()[(0, 0)].re - r.sinh().powi(2)).abs() < 1e-10);
        assert!((p.alpha()[(0, 0)].re + r.sinh() * r.cosh()).abs() < 1e-10);
        let spec = QuasiFreeSpec::with_map(&[0.0], map);
        assert!(purity_defect(&spec.onepdm().unwrap()) < 1e-12);
        let rep = verify_quasifree(&spec, &s, 6).unwrap();
        assert!(rep.passed, "worst {} at {}", rep.worst, rep.worst_label);
    }

    #[test]
    fn gibbs_trace_closed_form() {
        let s = FockSpace::new(2, 80).unwrap();
        let (t, exact) = gibbs_trace(&[1.0, 0.5], &s).unwrap();
        assert!((t - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn rotated_thermal_matches_wick() {
        let spec = QuasiFreeSpec::with_map(&[0.4], BogoliubovMap::squeeze(0.25));
        let s = one_mode_space(40);
        let rep = verify_quasifree(&spec, &s, 6).unwrap();
        assert!(rep.passed, "worst {} at {}", rep.worst, rep.worst_label);
        assert!(rep.number_identity < 1e-8);
    }

    #[test]
    fn two_mode_pure_state_matches_wick() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let map = crate::sampling::random_bogoliubov(&mut rng, 2, 0.3);
        let spec = QuasiFreeSpec::with_map(&[0.0, 0.0], map);
        let s = FockSpace::new(2, 40).unwrap();
        let rep = verify_quasifree(&spec, &s, 4).unwrap();
        assert!(rep.passed, "worst {} at {}", rep.worst, rep.worst_label);
        let p = crate::fock::onepdm_of_state(&s, &build_density(&spec, &s).unwrap().state).unwrap();
        let q = spec.onepdm().unwrap();
        assert!(crate::linalg::max_abs(&(p.gamma() - q.gamma())) < 1e-9);
        assert!(crate::linalg::max_abs(&(p.alpha() - q.alpha())) < 1e-9);
    }

    #[test]
    fn spec_onepdm_is_diagonalized_by_its_map() {
        let map = BogoliubovMap::squeeze(0.5);
        let spec = QuasiFreeSpec::with_map(&[0.3], map.clone());
        let g = crate::onepdm::full_gamma(&spec.onepdm().unwrap());
        let d = map.full().adjoint() * g * map.full();
        assert!((d[(0, 0)].re - 0.3).abs() < 1e-12 && (d[(1, 1)].re - 1.3).abs() < 1e-12);
        assert!(d[(0, 1)].norm() < 1e-12);
    }
}
