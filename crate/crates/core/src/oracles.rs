//! Independent ground truth for curve invariants.
//!
//! Nothing here touches quotient charts: the Jacobian oracle is plain linear algebra on
//! truncated monomial spaces, and the classical oracle resolves with `(1,1)` blow-ups on
//! smooth charts only.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::monodromy::{acampo, CharProduct};
use crate::wpoly::factor::rational_roots;
use crate::wpoly::factor_univariate;
use crate::{Rat, WPoly};

/// Truncation degrees beyond this are treated as a failure to stabilize.
pub const MAX_TRUNCATION: u32 = 64;
const MAX_CLASSICAL_BLOWUPS: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("local algebra does not stabilize up to degree {0}: not an isolated singularity")]
    NonIsolated(u32),
    #[error("classical resolution needs a non-rational center: {0}")]
    NonRationalCenter(String),
    #[error("the germ does not vanish at the origin")]
    NotThroughOrigin,
    #[error("blow-up limit reached")]
    BlowupLimit,
}

/// Index of `x^a y^b` among monomials ordered by degree, then by `b`.
fn monomial_index(a: u32, b: u32) -> usize {
    let d = (a + b) as usize;
    d * (d + 1) / 2 + b as usize
}

/// `dim Q[x,y]/(I + m^{deg+1})` for the ideal generated by `gens`.
fn truncated_colength(gens: &[WPoly], deg: u32) -> usize {
    let total = monomial_index(0, deg) + 1;
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    for f in gens {
        let Some(ord) = f.order() else { continue };
        for s in 0..=deg.saturating_sub(ord) {
            for b in 0..=s {
                let a = s - b;
                let mut row: BTreeMap<usize, Rat> = BTreeMap::new();
                for (e, c) in f.terms() {
                    let (ea, eb) = (e[0] + a, e[1] + b);
                    if ea + eb <= deg {
                        row.insert(monomial_index(ea, eb), c.clone());
                    }
                }
                reduce_and_insert(&mut pivots, row);
            }
        }
    }
    total - pivots.len()
}

/// Gaussian elimination step: pivots are normalized to 1 at their leading column.
fn reduce_and_insert(pivots: &mut BTreeMap<usize, BTreeMap<usize, Rat>>, mut row: BTreeMap<usize, Rat>) {
    while let Some((&col, lead)) = row.iter().next() {
        let lead = lead.clone();
        match pivots.get(&col) {
            Some(piv) => {
                for (k, v) in piv {
                    let nv = row.get(k).cloned().unwrap_or_else(Rat::zero) - &lead * v;
                    if nv.is_zero() {
                        row.remove(k);
                    } else {
                        row.insert(*k, nv);
                    }
                }
            }
            None => {
                for v in row.values_mut() {
                    *v = &*v / &lead;
                }
                pivots.insert(col, row);
                return;
            }
        }
    }
}

/// `dim Q[[x,y]]/(gens)` for an ideal of finite colength at the origin.
///
/// Certified by Nakayama: once the truncated colength is equal at two consecutive degrees,
/// `m^{D+1}` lies in the ideal locally; the value is additionally confirmed at `D + 2`.
pub fn local_algebra_dim(gens: &[WPoly]) -> Result<u64, OracleError> {
    let origin = [Rat::zero(), Rat::zero()];
    if gens.iter().any(|g| !g.eval(&origin).is_zero()) {
        return Ok(0);
    }
    let mut prev = truncated_colength(gens, 0);
    for deg in 1..=MAX_TRUNCATION {
        let cur = truncated_colength(gens, deg);
        if cur == prev {
            let check = truncated_colength(gens, deg + 2);
            if check == cur {
                return Ok(cur as u64);
            }
        }
        prev = cur;
    }
    Err(OracleError::NonIsolated(MAX_TRUNCATION))
}

/// Milnor number as the colength of the Jacobian ideal.
pub fn milnor_jacobian(h: &WPoly) -> Result<u64, OracleError> {
    local_algebra_dim(&[h.derivative(0), h.derivative(1)])
}

/// `(p-1)(q-1)` for `x^p + y^q`.
pub fn quasihomog_mu(p: u64, q: u64) -> u64 {
    (p - 1) * (q - 1)
}

struct SmoothPoint {
    u_exp: i64,
    v_exp: i64,
    g: WPoly,
}

impl SmoothPoint {
    fn needs_blowup(&self) -> bool {
        let zero = Rat::zero();
        if !self.g.eval(&[zero.clone(), zero.clone()]).is_zero() {
            return false;
        }
        match (self.u_exp > 0, self.v_exp > 0) {
            (false, false) => self.g.order() != Some(1),
            (true, false) => self.g.eval_var(0, &zero).min_degree_in(1) != Some(1),
            (false, true) => self.g.eval_var(1, &zero).min_degree_in(0) != Some(1),
            (true, true) => true,
        }
    }
}

/// Classical A'Campo polynomial from an embedded resolution by ordinary blow-ups.
///
/// Each divisor contributes `(t^m - 1)^{2 - r}` with `r` the number of points where it
/// meets other divisors or the strict transform.
pub fn classical_charpoly(h: &WPoly) -> Result<CharProduct, OracleError> {
    let zero = Rat::zero();
    if h.is_zero() || !h.eval(&[zero.clone(), zero.clone()]).is_zero() {
        return Err(OracleError::NotThroughOrigin);
    }
    // (multiplicity, removed points) per divisor.
    let mut divisors: Vec<(i64, i64)> = Vec::new();
    let mut queue = VecDeque::from([SmoothPoint { u_exp: 0, v_exp: 0, g: h.clone() }]);
    let x = WPoly::var(2, 0);
    let y = WPoly::var(2, 1);
    while let Some(pt) = queue.pop_front() {
        if !pt.needs_blowup() {
            continue;
        }
        if divisors.len() >= MAX_CLASSICAL_BLOWUPS {
            return Err(OracleError::BlowupLimit);
        }
        let nu = pt.g.order().expect("nonzero germ");
        let m = pt.u_exp + pt.v_exp + i64::from(nu);
        let xy = &x * &y;
        // Chart 1: (x, y) = (u, u v); chart 2: (x, y) = (u v, v).
        let g1 = pt.g.compose(&[x.clone(), xy.clone()]).div_monomial(&[nu, 0]).expect("order divides");
        let g2 = pt.g.compose(&[xy.clone(), y.clone()]).div_monomial(&[0, nu]).expect("order divides");
        let mut removed = 0;
        let origin1 = SmoothPoint { u_exp: m, v_exp: pt.v_exp, g: g1.clone() };
        let origin2 = SmoothPoint { u_exp: pt.u_exp, v_exp: m, g: g2 };
        for (o, other_divisor) in [(origin1, pt.v_exp > 0), (origin2, pt.u_exp > 0)] {
            let through = o.g.eval(&[zero.clone(), zero.clone()]).is_zero();
            if through || other_divisor {
                removed += 1;
            }
            queue.push_back(o);
        }
        let axis = g1.eval_var(0, &zero).to_univariate(1).expect("univariate");
        let (_, rest) = axis.strip_t_power();
        if rest.degree().unwrap_or(0) > 0 {
            let factors = factor_univariate(&rest).factors;
            removed += factors.iter().map(|(f, _)| f.degree().unwrap_or(0) as i64).sum::<i64>();
            for (phi, _) in factors.iter().filter(|(_, k)| *k > 1) {
                let roots = rational_roots(phi);
                let Some((v0, _)) = roots.first() else {
                    return Err(OracleError::NonRationalCenter(WPoly::from_univariate(1, 0, phi).to_string_with(&["v"])));
                };
                queue.push_back(SmoothPoint { u_exp: m, v_exp: 0, g: g1.translate(1, v0) });
            }
        }
        divisors.push((m, removed));
    }
    let strata: Vec<(u64, i64)> = divisors.iter().map(|&(m, r)| (m as u64, 2 - r)).collect();
    Ok(acampo(&strata, 1))
}
