//! Links between products, thread modules and the filtration spectral
//! sequence.

use super::solve::{class_polys, slot_weight};
use super::{solve_defining_system, MasseyError, MasseyInput, SolveOptions};
use crate::cochain::{chase, BlockCache, Cochain, Filtered, Form, ModuleCochain, ThreadAction};
use crate::exactnum::{Poly, Rational, Var};
use crate::threadmod::{connection_of, ThreadSpec};
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityVerdict {
    /// Weight of the related cocycle.
    pub target: u32,
    /// Free parameters whose weight equals their slot's top weight:
    /// (slot, weight) after constraint elimination.
    pub top_weight_freedom: Vec<((usize, usize), u32)>,
    /// Weights below target where the cocycle's cohomology is nonzero.
    pub lower_classes: Vec<u32>,
    pub pass: bool,
}

/// Checks that alternative defining systems only differ below the top
/// weight and that nothing lives below the target weight.
pub fn rigidity_check(inputs: &[MasseyInput]) -> Result<RigidityVerdict, MasseyError> {
    let sys = solve_defining_system(inputs, &SolveOptions::standard())?;
    let target = slot_weight(inputs, 1, inputs.len());
    let top_weight_freedom: Vec<_> = sys
        .params
        .iter()
        .filter(|p| !sys.eliminated.contains_key(&p.var) && p.weight == slot_weight(inputs, p.slot.0, p.slot.1))
        .map(|p| (p.slot, p.weight))
        .collect();
    let cache = BlockCache::new();
    let lower_classes: Vec<u32> = (1..target).filter(|w| cache.get(sys.degree, *w).dim() > 0).collect();
    let pass = top_weight_freedom.is_empty() && lower_classes.is_empty();
    Ok(RigidityVerdict { target, top_weight_freedom, lower_classes, pass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralVerdict {
    pub bottom: i32,
    pub top: i32,
    /// Largest r with d_1 = ... = d_{r-1} = 0 on the start element.
    pub r: i32,
    pub weight: u32,
    /// Class of the f_top component of d_r(f_bottom (x) Omega).
    pub image_class: Vec<Rational>,
    /// Class of c(A) for the module-induced connection.
    pub connection_class: Vec<Rational>,
    /// Whether d_r is nonzero in E_r.
    pub nonzero_in_page: bool,
}

/// The module-induced connection extended by Omega: inputs read off the
/// subdiagonal from the top of the module down, Omega last.
fn module_system(module: &ThreadSpec, omega: &MasseyInput) -> Result<(Vec<MasseyInput>, SolveOptions), MasseyError> {
    let conn = connection_of(module)?;
    let d = conn.size();
    let mut inputs = Vec::new();
    let mut opts = SolveOptions::default();
    for i in 1..d {
        let (r, c) = (d - i, d - 1 - i);
        inputs.push(MasseyInput::new(conn.get(r, c)).ok_or(MasseyError::BadInput(i))?);
        for j in i + 1..d {
            let c = d - 1 - j;
            opts.fixed.insert((i, j), conn.get(r, c).lift());
        }
    }
    inputs.push(omega.clone());
    Ok((inputs, opts))
}

/// The inputs of the product a module-induced connection computes.
pub fn module_inputs(module: &ThreadSpec, omega: &MasseyInput) -> Result<Vec<MasseyInput>, MasseyError> {
    Ok(module_system(module, omega)?.0)
}

/// Lifts f_bottom (x) Omega through the thread-index filtration and compares
/// the first nonzero differential with the related cocycle.
pub fn spectral_check(module: &ThreadSpec, omega: &MasseyInput) -> Result<SpectralVerdict, MasseyError> {
    let idx = ThreadAction::indices(module);
    let (bottom, top) = (idx[0], *idx.last().expect("nonempty module"));
    let q = omega.degree;
    let mu = bottom - omega.weight as i32;
    let filtered = Filtered::new(module, mu)?;
    let x0 = ModuleCochain::tensor(&omega.form, bottom);
    let ch = chase(&filtered, &x0, q);

    let (inputs, opts) = module_system(module, omega)?;
    let sys = solve_defining_system(&inputs, &opts)?;
    let c_a: Cochain = sys.cocycle.map(|p| p.constant_term());
    // each e_i step raises the index by i
    let weight = omega.weight + (top - bottom) as u32;
    let cache = BlockCache::new();
    let block = cache.get(q + 1, weight);
    let connection_class = block.coordinates(&c_a.weight_part(weight));

    let image_top = ch.image.component(top);
    let image_class = block.coordinates(&image_top.weight_part(weight));
    let r = ch.r;
    let nonzero_in_page = !ch.permanent && !filtered.vanishes_in_page(&ch.image, r, bottom + r, q + 1);
    let other = ch.image.terms().any(|((_, j), _)| *j != top);
    let extra = c_a.sub(&c_a.weight_part(weight));
    if image_class != connection_class || other || !extra.is_zero() {
        return Err(MasseyError::Mismatch(format!(
            "d_{r} image {image_top} has class {image_class:?}, c(A) = {c_a} has class {connection_class:?}"
        )));
    }
    Ok(SpectralVerdict { bottom, top, r, weight, image_class, connection_class, nonzero_in_page })
}

#[derive(Debug, Clone)]
pub struct FfrResult {
    pub ones: usize,
    pub degree: usize,
    /// Class coordinates as polynomials in alpha, keyed by (weight, rep).
    pub coords: Vec<((u32, usize), Poly)>,
    pub conditions: Vec<Poly>,
    /// Rational alpha with a zero class; None when every alpha works.
    pub trivial_alphas: Option<Vec<Rational>>,
}

pub const ALPHA: Var = 0;

/// The product of `ones` copies of e^1 with Omega, using the connection
/// whose 1-form block has e^1 on the diagonal, alpha e^2 next to it and
/// zeros below.
pub fn ffr_product(ones: usize, omega: &MasseyInput) -> Result<FfrResult, MasseyError> {
    let mut inputs = vec![MasseyInput::e(1); ones];
    inputs.push(omega.clone());
    let mut opts = SolveOptions { external: BTreeSet::from([ALPHA]), ..Default::default() };
    for i in 1..=ones {
        for j in i + 1..=ones {
            let f = if j == i + 1 { Form::<Poly>::e(2).mul_scalar(&Poly::var(ALPHA)) } else { Form::zero() };
            opts.fixed.insert((i, j), f);
        }
    }
    let sys = solve_defining_system(&inputs, &opts)?;
    let cache = BlockCache::new();
    let coords = class_polys(&sys, &cache);
    let mut candidates: Option<Vec<Rational>> = None;
    for p in coords.iter().map(|(_, p)| p).chain(&sys.conditions) {
        if p.is_zero() {
            continue;
        }
        let coeffs = p.univariate(ALPHA).expect("only alpha remains");
        let roots = rational_roots(&coeffs);
        candidates = Some(match candidates {
            None => roots,
            Some(prev) => prev.into_iter().filter(|r| roots.contains(r)).collect(),
        });
    }
    Ok(FfrResult {
        ones,
        degree: sys.degree,
        coords,
        conditions: sys.conditions.clone(),
        trivial_alphas: candidates,
    })
}

fn eval_int(coeffs: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    // q^deg * f(p/q)
    let deg = coeffs.len() - 1;
    let mut acc = BigInt::zero();
    for (k, c) in coeffs.iter().enumerate() {
        acc += c * num::pow(p.clone(), k) * num::pow(q.clone(), deg - k);
    }
    acc
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs().to_u64().expect("coefficient too large for root search");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}

/// Distinct rational roots of a univariate polynomial, coefficients lowest
/// degree first, sorted ascending.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = c.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = BTreeSet::new();
    if ints[0].is_zero() {
        roots.insert(Rational::zero());
        while ints.first().is_some_and(|x| x.is_zero()) {
            ints.remove(0);
        }
    }
    if ints.len() > 1 {
        let lead = ints.last().unwrap().clone();
        for p in divisors(&ints[0]) {
            for q in divisors(&lead) {
                for s in [p.clone(), -p.clone()] {
                    if eval_int(&ints, &s, &q).is_zero() {
                        roots.insert(Rational::new(s, q.clone()));
                    }
                }
            }
        }
    }
    roots.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn roots() {
        // (6a - 1)(24a - 1) = 144a^2 - 30a + 1
        assert_eq!(rational_roots(&[int(1), int(-30), int(144)]), vec![rat(1, 24), rat(1, 6)]);
        assert_eq!(rational_roots(&[int(0), int(2), int(0), int(-2)]), vec![int(-1), int(0), int(1)]);
        assert!(rational_roots(&[int(1), int(0), int(1)]).is_empty());
        assert!(rational_roots(&[int(3)]).is_empty());
    }

    #[test]
    fn ffr_k2_only_one_sixth() {
        let r = ffr_product(3, &MasseyInput::e(2)).unwrap();
        assert!(r.conditions.is_empty());
        assert_eq!(r.trivial_alphas, Some(vec![rat(1, 6)]));
    }

    #[test]
    fn rigidity_triple() {
        let v = rigidity_check(&[MasseyInput::e(1), MasseyInput::e(2), MasseyInput::e(2)]).unwrap();
        assert_eq!(v.target, 5);
        assert!(v.lower_classes.is_empty());
    }
}
