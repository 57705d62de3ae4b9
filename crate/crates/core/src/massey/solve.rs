use super::{related_cocycle, FormalConnection, MasseyError};
use crate::cochain::{BlockCache, Cochain, Form};
use crate::exactnum::{rank, solve as solve_linear, Poly, Rational, SparseMatrix, Var};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// A weight-homogeneous closed input form.
#[derive(Debug, Clone, PartialEq)]
pub struct MasseyInput {
    pub form: Cochain,
    pub degree: usize,
    pub weight: u32,
}

impl MasseyInput {
    pub fn new(form: Cochain) -> Option<Self> {
        let degree = form.degree()?;
        let weight = form.weight()?;
        if !form.d().is_zero() {
            return None;
        }
        Some(MasseyInput { form, degree, weight })
    }

    pub fn e(k: u32) -> Self {
        Self::new(Cochain::e(k)).expect("e^k is closed for k <= 2")
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Slots (i, j) held fixed instead of solved.
    pub fixed: BTreeMap<(usize, usize), Form<Poly>>,
    /// Symbols that are never eliminated; constraints in them alone become
    /// definedness conditions.
    pub external: BTreeSet<Var>,
    /// Whether each solved slot gets the closed-form kernel as parameters.
    pub with_params: bool,
}

impl SolveOptions {
    pub fn standard() -> Self {
        SolveOptions { with_params: true, ..Default::default() }
    }
}

/// A free parameter multiplying a cohomology representative in one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub var: Var,
    pub slot: (usize, usize),
    pub degree: usize,
    pub weight: u32,
    pub rep: usize,
}

/// Solved connection with entries polynomial in the kernel parameters.
#[derive(Debug, Clone)]
pub struct DefiningSystem {
    pub inputs: Vec<MasseyInput>,
    pub connection: FormalConnection<Poly>,
    pub params: Vec<Param>,
    /// Parameters fixed by constraints, as v -> expression.
    pub eliminated: BTreeMap<Var, Poly>,
    /// Constraints that could not be solved linearly; they must vanish.
    pub hard: Vec<Poly>,
    /// Constraints only in external symbols.
    pub conditions: Vec<Poly>,
    /// Degree of the related cocycle.
    pub degree: usize,
    pub cocycle: Form<Poly>,
}

fn slot_degree(inputs: &[MasseyInput], i: usize, j: usize) -> usize {
    inputs[i - 1..j].iter().map(|x| x.degree - 1).sum::<usize>() + 1
}

pub(crate) fn slot_weight(inputs: &[MasseyInput], i: usize, j: usize) -> u32 {
    inputs[i - 1..j].iter().map(|x| x.weight).sum()
}

struct Solver<'a> {
    inputs: &'a [MasseyInput],
    opts: &'a SolveOptions,
    cache: BlockCache,
    a: FormalConnection<Poly>,
    next_var: Var,
    params: Vec<Param>,
    eliminated: BTreeMap<Var, Poly>,
    hard: Vec<Poly>,
    conditions: Vec<Poly>,
}

impl Solver<'_> {
    fn substitute(&mut self, v: Var, value: &Poly) {
        let sub = |p: &Poly| p.substitute(v, value);
        self.a = self.a.map_entries(|f| f.map(sub));
        for e in self.eliminated.values_mut() {
            *e = sub(e);
        }
        self.hard = self.hard.iter().map(sub).filter(|p| !p.is_zero()).collect();
        self.eliminated.insert(v, value.clone());
    }

    fn reduce(&self, p: &Poly) -> Poly {
        self.eliminated.iter().fold(p.clone(), |acc, (v, e)| if acc.contains(*v) { acc.substitute(*v, e) } else { acc })
    }

    /// Imposes constraint = 0; errors when it is a nonzero constant.
    fn impose(&mut self, c: &Poly, slot: (usize, usize), weight: u32) -> Result<(), MasseyError> {
        let c = self.reduce(c);
        if c.is_zero() {
            return Ok(());
        }
        if c.is_constant() {
            return Err(MasseyError::Undefined { i: slot.0, j: slot.1, weight });
        }
        let vars = c.variables();
        if vars.iter().all(|v| self.opts.external.contains(v)) {
            self.conditions.push(c);
            return Ok(());
        }
        for v in vars.iter().filter(|v| !self.opts.external.contains(v)) {
            if let Some((k, rest)) = c.split_linear(*v) {
                let value = rest.scale(&(-k.recip()));
                self.substitute(*v, &value);
                return Ok(());
            }
        }
        self.hard.push(c);
        Ok(())
    }

    fn solve_slot(&mut self, i: usize, j: usize) -> Result<(), MasseyError> {
        let deg = slot_degree(self.inputs, i, j);
        let top = slot_weight(self.inputs, i, j);
        let mut rhs = Form::zero();
        for r in i..j {
            rhs = rhs.add(&self.a.slot(i, r).bar().wedge(&self.a.slot(r + 1, j)));
        }
        if let Some(f) = self.opts.fixed.get(&(i, j)) {
            if !f.d().sub(&rhs).is_zero() {
                return Err(MasseyError::BadFixedSlot { i, j });
            }
            self.a.set_slot(i, j, f.clone());
            return Ok(());
        }
        let mut sol = Form::zero();
        let mut constraints = Vec::new();
        for w in rhs.weights() {
            let part = rhs.weight_part(w);
            let block = self.cache.get(deg + 1, w);
            let coords = block.coordinates(&part);
            let exact = block.remove_class(&part, &coords);
            sol = sol.add(&block.primitive(&exact));
            constraints.extend(coords.into_iter().map(|c| (c, w)));
        }
        self.a.set_slot(i, j, sol);
        for (c, w) in constraints {
            self.impose(&c, (i, j), w)?;
        }
        if self.opts.with_params {
            let mut extra = Form::zero();
            for w in 1..=top {
                let block = self.cache.get(deg, w);
                for k in 0..block.dim() {
                    let v = self.next_var;
                    self.next_var += 1;
                    self.params.push(Param { var: v, slot: (i, j), degree: deg, weight: w, rep: k });
                    extra = extra.add(&block.representative(k).lift::<Poly>().mul_scalar(&Poly::var(v)));
                }
            }
            let cur = self.a.slot(i, j);
            self.a.set_slot(i, j, cur.add(&extra));
        }
        Ok(())
    }
}

/// Solves da(i,j) = sum_r abar(i,r) a(r+1,j) slot by slot in increasing
/// j - i, leaving the corner zero.
pub fn solve_defining_system(inputs: &[MasseyInput], opts: &SolveOptions) -> Result<DefiningSystem, MasseyError> {
    let n = inputs.len();
    assert!(n >= 2, "a Massey product needs at least two inputs");
    let first_var = opts.external.iter().max().map_or(0, |v| v + 1);
    let mut s = Solver {
        inputs,
        opts,
        cache: BlockCache::new(),
        a: FormalConnection::new(n + 1),
        next_var: first_var,
        params: Vec::new(),
        eliminated: BTreeMap::new(),
        hard: Vec::new(),
        conditions: Vec::new(),
    };
    for (k, x) in inputs.iter().enumerate() {
        s.a.set_slot(k + 1, k + 1, x.form.lift());
    }
    for len in 1..n - 1 {
        for i in 1..=n - len {
            s.solve_slot(i, i + len)?;
        }
    }
    let cocycle = related_cocycle(&s.a);
    Ok(DefiningSystem {
        inputs: inputs.to_vec(),
        degree: slot_degree(inputs, 1, n) + 1,
        connection: s.a,
        params: s.params,
        eliminated: s.eliminated,
        hard: s.hard,
        conditions: s.conditions,
        cocycle,
    })
}

/// Class coordinates keyed by (weight, representative index); zeros omitted.
pub type ClassVector = BTreeMap<(u32, usize), Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Defined,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSet {
    Point,
    /// base + span of `dim` independent directions.
    Affine { dim: usize },
    /// Classes found on the parameter grid; not exhaustive.
    SearchBounded { points: usize },
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    NonTrivial,
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct MasseyVerdict {
    pub status: Status,
    pub degree: usize,
    pub base: ClassVector,
    pub directions: Vec<ClassVector>,
    /// Grid results when the value set is not provably affine.
    pub found: Vec<ClassVector>,
    pub parameters: usize,
    pub value_set: ValueSet,
    pub trivial: Triviality,
    /// Connection at one parameter point; it realizes 0 when trivial.
    pub certificate: Option<FormalConnection<Rational>>,
    pub undefined_at: Option<(usize, usize, u32)>,
    pub conditions: Vec<Poly>,
}

impl MasseyVerdict {
    fn undefined(i: usize, j: usize, w: u32) -> Self {
        MasseyVerdict {
            status: Status::Undefined,
            degree: 0,
            base: ClassVector::new(),
            directions: Vec::new(),
            found: Vec::new(),
            parameters: 0,
            value_set: ValueSet::Empty,
            trivial: Triviality::Undetermined,
            certificate: None,
            undefined_at: Some((i, j, w)),
            conditions: Vec::new(),
        }
    }
}

/// Class coordinates of the related cocycle, still polynomial.
pub(crate) fn class_polys(sys: &DefiningSystem, cache: &BlockCache) -> Vec<((u32, usize), Poly)> {
    let mut out = Vec::new();
    for w in sys.cocycle.weights() {
        let block = cache.get(sys.degree, w);
        for (k, c) in block.coordinates(&sys.cocycle.weight_part(w)).into_iter().enumerate() {
            out.push(((w, k), c));
        }
    }
    out
}

fn to_class(keys: &[(u32, usize)], v: &[Rational]) -> ClassVector {
    keys.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect()
}

fn specialize(a: &FormalConnection<Poly>, point: &BTreeMap<Var, Rational>) -> FormalConnection<Rational> {
    let mut out = FormalConnection::new(a.size());
    for ((r, c), f) in a.entries() {
        out.set(*r, *c, f.map(|p| p.eval(point)));
    }
    out
}

const GRID: [i64; 5] = [-2, -1, 0, 1, 2];
const GRID_CAP: usize = 5;

pub fn product_set(inputs: &[MasseyInput]) -> MasseyVerdict {
    product_set_with(inputs, &SolveOptions::standard())
}

/// Value set of the product over all parameter values.
pub fn product_set_with(inputs: &[MasseyInput], opts: &SolveOptions) -> MasseyVerdict {
    let sys = match solve_defining_system(inputs, opts) {
        Ok(s) => s,
        Err(MasseyError::Undefined { i, j, weight }) => return MasseyVerdict::undefined(i, j, weight),
        Err(e) => panic!("defining system failed: {e}"),
    };
    verdict_of(&sys)
}

pub(crate) fn verdict_of(sys: &DefiningSystem) -> MasseyVerdict {
    let cache = BlockCache::new();
    let coords = class_polys(sys, &cache);
    let keys: Vec<(u32, usize)> = coords.iter().map(|(k, _)| *k).collect();
    let polys: Vec<Poly> = coords.into_iter().map(|(_, p)| p).collect();
    let mut verdict = MasseyVerdict {
        status: Status::Defined,
        degree: sys.degree,
        base: ClassVector::new(),
        directions: Vec::new(),
        found: Vec::new(),
        parameters: sys.params.len() - sys.eliminated.len(),
        value_set: ValueSet::Point,
        trivial: Triviality::NonTrivial,
        certificate: None,
        undefined_at: None,
        conditions: sys.conditions.clone(),
    };
    if sys.hard.is_empty() {
        if let Some((base, dirs, point)) = affine_analysis(&polys) {
            verdict.base = to_class(&keys, &base);
            verdict.directions = dirs.iter().map(|d| to_class(&keys, d)).collect();
            verdict.value_set = if dirs.is_empty() { ValueSet::Point } else { ValueSet::Affine { dim: dirs.len() } };
            let zero = point.is_some();
            verdict.trivial = if zero { Triviality::Trivial } else { Triviality::NonTrivial };
            verdict.certificate = Some(specialize(&sys.connection, &point.unwrap_or_default()));
            return verdict;
        }
    }
    grid_search(sys, &keys, &polys, &mut verdict);
    verdict
}

/// Splits the coordinates as L y + g(z) with y the variables entering only
/// linearly; affine when g(z) - g(0) stays inside span L. Returns the base
/// point, a basis of directions and, if 0 is attained, a parameter point.
#[allow(clippy::type_complexity)]
fn affine_analysis(polys: &[Poly]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>, Option<BTreeMap<Var, Rational>>)> {
    let dim = polys.len();
    let vars: BTreeSet<Var> = polys.iter().flat_map(|p| p.variables()).collect();
    let linear: Vec<Var> = vars
        .iter()
        .copied()
        .filter(|v| polys.iter().all(|p| !p.contains(*v) || p.pure_linear_coeff(*v).is_some()))
        .collect();
    let columns: Vec<Vec<Rational>> =
        linear.iter().map(|v| polys.iter().map(|p| p.pure_linear_coeff(*v).unwrap_or_else(Rational::zero)).collect()).collect();
    let rest: Vec<Poly> = polys
        .iter()
        .map(|p| linear.iter().fold(p.clone(), |acc, v| acc.substitute(*v, &Poly::zero())))
        .collect();
    let base: Vec<Rational> = rest.iter().map(|p| p.constant_term()).collect();
    let lin_rank = if columns.is_empty() { 0 } else { rank(&SparseMatrix::from_columns(dim, &columns)) };
    let in_span = |v: &[Rational]| {
        if v.iter().all(|c| c.is_zero()) {
            return true;
        }
        let mut all = columns.clone();
        all.push(v.to_vec());
        rank(&SparseMatrix::from_columns(dim, &all)) == lin_rank
    };
    // every non-constant part of g must be absorbed by the linear directions
    let mut monos = BTreeSet::new();
    for p in &rest {
        for (m, _) in p.terms() {
            if !m.is_empty() {
                monos.insert(m.clone());
            }
        }
    }
    for m in &monos {
        let v: Vec<Rational> = rest.iter().map(|p| p.coeff_of(m)).collect();
        if !in_span(&v) {
            return None;
        }
    }
    // independent directions, in variable order
    let mut dirs: Vec<Vec<Rational>> = Vec::new();
    for col in &columns {
        let mut trial = dirs.clone();
        trial.push(col.clone());
        if rank(&SparseMatrix::from_columns(dim, &trial)) > dirs.len() {
            dirs = trial;
        }
    }
    let point = if base.iter().all(|c| c.is_zero()) {
        Some(BTreeMap::new())
    } else if columns.is_empty() {
        None
    } else {
        let neg: Vec<Rational> = base.iter().map(|c| -c).collect();
        solve_linear(&SparseMatrix::from_columns(dim, &columns), &neg)
            .ok()
            .map(|y| linear.iter().copied().zip(y).collect())
    };
    Some((base, dirs, point))
}

fn grid_search(sys: &DefiningSystem, keys: &[(u32, usize)], polys: &[Poly], verdict: &mut MasseyVerdict) {
    let vars: Vec<Var> = polys
        .iter()
        .chain(&sys.hard)
        .flat_map(|p| p.variables())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .take(GRID_CAP)
        .collect();
    let mut found: Vec<ClassVector> = Vec::new();
    let mut zero_point = None;
    let mut first_point = None;
    let total = GRID.len().pow(vars.len() as u32);
    for code in 0..total {
        let mut point = BTreeMap::new();
        let mut c = code;
        for v in &vars {
            point.insert(*v, Rational::from_integer(GRID[c % GRID.len()].into()));
            c /= GRID.len();
        }
        if sys.hard.iter().any(|h| !h.eval(&point).is_zero()) {
            continue;
        }
        let value: Vec<Rational> = polys.iter().map(|p| p.eval(&point)).collect();
        let class = to_class(keys, &value);
        if class.is_empty() && zero_point.is_none() {
            zero_point = Some(point.clone());
        }
        if first_point.is_none() {
            first_point = Some(point.clone());
        }
        if !found.contains(&class) {
            found.push(class);
        }
    }
    verdict.value_set = ValueSet::SearchBounded { points: found.len() };
    verdict.base = found.first().cloned().unwrap_or_default();
    verdict.found = found;
    verdict.trivial = if zero_point.is_some() { Triviality::Trivial } else { Triviality::Undetermined };
    verdict.certificate = zero_point.or(first_point).map(|p| specialize(&sys.connection, &p));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::massey::mc_residual;

    fn g_plus() -> MasseyInput {
        MasseyInput::new(Cochain::monomial(vec![2, 5], int(1)).sub(&Cochain::monomial(vec![3, 4], int(3)))).unwrap()
    }

    #[test]
    fn e1_e1_e1_is_trivial_point() {
        let e1 = MasseyInput::e(1);
        let v = product_set(&[e1.clone(), e1.clone(), e1]);
        assert_eq!(v.status, Status::Defined);
        assert_eq!(v.trivial, Triviality::Trivial);
        assert!(v.base.is_empty());
    }

    #[test]
    fn e1_e2_e2_single_point() {
        let v = product_set(&[MasseyInput::e(1), MasseyInput::e(2), MasseyInput::e(2)]);
        assert_eq!(v.value_set, ValueSet::Point);
        assert_eq!(v.trivial, Triviality::NonTrivial);
        // -[e2 e3] = 3 [e1 e4]
        assert_eq!(v.base, [((5, 0), int(3))].into());
        let cert = v.certificate.unwrap();
        let tau = mc_residual(&cert).unwrap();
        assert_eq!(tau, related_cocycle(&cert).neg());
    }

    #[test]
    fn undefined_when_subproduct_nontrivial() {
        let v = product_set(&[MasseyInput::e(1), MasseyInput::e(2), MasseyInput::e(2), MasseyInput::e(1)]);
        assert_eq!(v.status, Status::Undefined);
    }

    #[test]
    fn input_validation() {
        assert!(MasseyInput::new(Cochain::e(3)).is_none());
        assert_eq!(g_plus().weight, 7);
    }
}
