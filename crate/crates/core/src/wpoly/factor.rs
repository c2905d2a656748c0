//! Univariate factorization over the rationals.
//!
//! Squarefree parts are factored by the Berlekamp-Zassenhaus method: Berlekamp over a small
//! prime, linear Hensel lifting past a Mignotte-type coefficient bound, then recombination of
//! lifted factors by exact trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::UPoly;
use crate::Rat;

/// `f = unit * prod factors[i].0 ^ factors[i].1`, each factor monic irreducible over Q.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(UPoly<Rat>, u32)>,
}

/// Yun's squarefree decomposition of a nonzero polynomial: monic, pairwise coprime,
/// squarefree parts with their multiplicities.
pub fn squarefree_decomposition(f: &UPoly<Rat>) -> Vec<(UPoly<Rat>, u32)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = rational_gcd(&f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while b.degree().unwrap_or(0) > 0 {
        let a = rational_gcd(&b, &d);
        let next_b = b.exact_div(&a).expect("gcd divides");
        let next_c = d.exact_div(&a).expect("gcd divides");
        d = &next_c - &next_b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        b = next_b;
        i += 1;
    }
    out
}

/// Complete factorization of a nonzero polynomial.
pub fn factor_univariate(f: &UPoly<Rat>) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|(a, ka), (b, kb)| {
        a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())).then(ka.cmp(kb))
    });
    Factorization { unit: f.leading(), factors }
}

/// Distinct rational roots with multiplicities, ascending.
pub fn rational_roots(f: &UPoly<Rat>) -> Vec<(Rat, u32)> {
    let mut roots: Vec<(Rat, u32)> = factor_univariate(f)
        .factors
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, k)| (-g.coeff(0), k))
        .collect();
    roots.sort();
    roots
}

/// The rational `n`-th root of `r`, if one exists (the real one for odd `n`).
pub fn rational_nth_root(r: &Rat, n: u32) -> Option<Rat> {
    assert!(n > 0);
    if r.is_negative() {
        return if n % 2 == 1 { rational_nth_root(&-r, n).map(|s| -s) } else { None };
    }
    let root = |a: &BigInt| {
        let s = a.nth_root(n);
        (num_traits::pow(s.clone(), n as usize) == *a).then_some(s)
    };
    Some(Rat::new(root(r.numer())?, root(r.denom())?))
}

/// Monic gcd over Q computed by a primitive remainder sequence over Z, which avoids the
/// coefficient swell of plain Euclid on rational coefficients.
pub fn rational_gcd(f: &UPoly<Rat>, g: &UPoly<Rat>) -> UPoly<Rat> {
    if f.is_zero() || g.is_zero() {
        return (f + g).monic();
    }
    let (mut a, mut b) = (primitive_integer(f), primitive_integer(g));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while b.len() > 1 {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(&r) };
        if b.is_empty() {
            return integer_to_rat(&a).monic();
        }
    }
    UPoly::one()
}

/// `lc(b)^(deg a - deg b + 1) a mod b`; requires `deg a >= deg b >= 0`.
fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let lb = b.last().expect("nonzero").clone();
    let db = b.len() - 1;
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().expect("nonzero").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

/// Monic irreducible factors of a monic squarefree polynomial.
fn factor_squarefree(f: &UPoly<Rat>) -> Vec<UPoly<Rat>> {
    let n = f.degree().expect("nonzero");
    if n <= 1 {
        return vec![f.monic()];
    }
    let big = primitive_integer(f);
    zassenhaus(&big).into_iter().map(|g| integer_to_rat(&g).monic()).collect()
}

type ZPoly = Vec<BigInt>;

fn trim(v: &mut ZPoly) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Clears denominators and content; the leading coefficient is made positive.
fn primitive_integer(f: &UPoly<Rat>) -> ZPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut v: ZPoly = f.coeffs().iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in &mut v {
        *c /= &g;
    }
    if v.last().is_some_and(Signed::is_negative) {
        for c in &mut v {
            *c = -&*c;
        }
    }
    v
}

fn integer_to_rat(v: &ZPoly) -> UPoly<Rat> {
    UPoly::new(v.iter().map(|c| Rat::from_integer(c.clone())).collect())
}

fn primitive_part(v: &ZPoly) -> ZPoly {
    primitive_integer(&integer_to_rat(v))
}

const PRIMES: [u64; 30] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103,
    107, 109, 113, 127,
];

/// Berlekamp-Zassenhaus on a primitive squarefree integer polynomial of degree at least 2.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let lc = f.last().expect("nonzero").clone();
    // Try several good primes and keep the one giving the fewest modular factors.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &p in &PRIMES {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = monic_mod(&reduce_mod(f, p), p);
        if fp.len() != f.len() || gcd_mod(&fp, &derivative_mod(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = berlekamp(&fp, p);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    let (p, modular) = best.expect("some small prime keeps the polynomial squarefree");
    if modular.len() == 1 {
        return vec![f.clone()];
    }

    // Lift until p^k exceeds twice the coefficient bound for factors of lc * f.
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let bound = lc.abs() * (BigInt::one() << (f.len() - 1)) * (norm_sq.sqrt() + 1u32);
    let mut k = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2u32 {
        modulus *= p;
        k += 1;
    }
    let lifted = hensel_multi(f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

/// Lifts `f = lc * prod g_i (mod p)` to the same identity mod `p^k`, all `g_i` monic.
fn hensel_multi(f: &ZPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = num_traits::pow(BigInt::from(p), k as usize);
    let mut out = Vec::new();
    let mut rest = f.clone();
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            let inv = mod_inverse(rest.last().expect("nonzero"), &modulus);
            out.push(rest.iter().map(|c| sym_mod(&(c * &inv), &modulus)).collect());
            break;
        }
        // h = rest / g (mod p), carrying the leading coefficient.
        let rest_p = reduce_mod(&rest, p);
        let (h, r) = divrem_mod(&rest_p, g, p);
        debug_assert!(r.is_empty());
        let (gl, hl) = hensel_pair(&rest, g, &h, p, k, &modulus);
        out.push(gl);
        rest = hl;
    }
    out
}

/// Linear Hensel lifting of `f = g h (mod p)` with `g` monic to precision `p^k`.
fn hensel_pair(f: &ZPoly, g: &[u64], h: &[u64], p: u64, k: u32, modulus: &BigInt) -> (ZPoly, ZPoly) {
    let (one, s, t) = ext_gcd_mod(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let mut gz: ZPoly = g.iter().map(|&c| BigInt::from(c)).collect();
    let mut hz: ZPoly = h.iter().map(|&c| BigInt::from(c)).collect();
    let mut pj = BigInt::from(p);
    for _ in 1..k {
        // e = (f - g h) / p^j, reduced mod p.
        let prod = mul_z(&gz, &hz);
        let diff: ZPoly = (0..f.len().max(prod.len()))
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(modulus)
            })
            .collect();
        let e: Vec<u64> = {
            let mut v: Vec<u64> = diff
                .iter()
                .map(|c| {
                    debug_assert!((c % &pj).is_zero());
                    (c / &pj).mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
                })
                .collect();
            trim_u(&mut v);
            v
        };
        // dg = t e mod g, dh = s e + q h where t e = q g + dg.
        let (q, dg) = divrem_mod(&mul_mod(&t, &e, p), g, p);
        let dh = add_mod(&mul_mod(&s, &e, p), &mul_mod(&q, h, p), p);
        gz = add_scaled(&gz, &dg, &pj, modulus);
        hz = add_scaled(&hz, &dh, &pj, modulus);
        pj *= p;
    }
    let sym = |v: &ZPoly| {
        let mut w: ZPoly = v.iter().map(|c| sym_mod(c, modulus)).collect();
        trim(&mut w);
        w
    };
    (sym(&gz), sym(&hz))
}

fn add_scaled(a: &ZPoly, d: &[u64], scale: &BigInt, modulus: &BigInt) -> ZPoly {
    let n = a.len().max(d.len());
    let mut v: ZPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = BigInt::from(d.get(i).copied().unwrap_or(0));
            (x + y * scale).mod_floor(modulus)
        })
        .collect();
    trim(&mut v);
    v
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2u32 > *m {
        r - m
    } else {
        r
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient invertible mod p^k");
    e.x.mod_floor(m)
}

fn mul_z(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

/// Recombines lifted monic factors into true factors over Z.
fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut found = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = false;
        for subset in subsets(lifted.len(), size) {
            let lc = rest.last().expect("nonzero").clone();
            let mut g: ZPoly = vec![lc];
            for &i in &subset {
                g = mul_z(&g, &lifted[i]).iter().map(|c| c.mod_floor(modulus)).collect();
            }
            let g: ZPoly = g.iter().map(|c| sym_mod(c, modulus)).collect();
            let g = primitive_part(&g);
            if let Some(q) = integer_to_rat(&rest).exact_div(&integer_to_rat(&g)) {
                found.push(g);
                rest = primitive_integer(&q);
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                hit = true;
                break;
            }
        }
        if !hit {
            size += 1;
        }
    }
    found.push(rest);
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

// Arithmetic in F_p[t]: ascending coefficient vectors, no trailing zeros.

fn trim_u(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn reduce_mod(f: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = f.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect();
    trim_u(&mut v);
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn monic_mod(f: &[u64], p: u64) -> Vec<u64> {
    match f.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            f.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn add_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    trim_u(&mut v);
    v
}

fn sub_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect();
    trim_u(&mut v);
    v
}

fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim_u(&mut v);
    v
}

fn divrem_mod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        q[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bj % p) % p;
        }
    }
    r.truncate(db);
    trim_u(&mut r);
    trim_u(&mut q);
    (q, r)
}

fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = divrem_mod(&a, &b, p).1;
        a = b;
        b = r;
    }
    monic_mod(&a, p)
}

/// Returns `(g, s, t)` with `s a + t b = g` monic.
fn ext_gcd_mod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem_mod(&r0, &r1, p);
        let s2 = sub_mod(&s0, &mul_mod(&q, &s1, p), p);
        let t2 = sub_mod(&t0, &mul_mod(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("nonzero gcd"), p);
    let scale = |v: &[u64]| {
        let mut w: Vec<u64> = v.iter().map(|&c| c * inv % p).collect();
        trim_u(&mut w);
        w
    };
    (scale(&r0), scale(&s0), scale(&t0))
}

fn derivative_mod(f: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    trim_u(&mut v);
    v
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    // Row i of Q holds x^{ip} mod f.
    let xp = {
        let mut acc = vec![1u64];
        let mut base = vec![0u64, 1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = divrem_mod(&mul_mod(&acc, &base, p), f, p).1;
            }
            base = divrem_mod(&mul_mod(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut rows = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = divrem_mod(&mul_mod(&cur, &xp, p), f, p).1;
    }
    // Kernel of (Q - I)^T: vectors v with sum_i v_i (Q - I)[i][j] = 0.
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            let mut val = row[j];
            if i == j {
                val = (val + p - 1) % p;
            }
            a[j][i] = val;
        }
    }
    let basis = nullspace_mod(a, p);
    let mut factors = vec![f.to_vec()];
    for v in &basis {
        if factors.len() == basis.len() {
            break;
        }
        let mut v = v.clone();
        trim_u(&mut v);
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors {
            let mut pending = vec![u];
            for s in 0..p {
                let mut split = Vec::new();
                for w in pending {
                    if w.len() <= 2 {
                        split.push(w);
                        continue;
                    }
                    let shifted = sub_mod(&v, &[s], p);
                    let g = gcd_mod(&w, &shifted, p);
                    if g.len() > 1 && g.len() < w.len() {
                        let other = monic_mod(&divrem_mod(&w, &g, p).0, p);
                        split.push(g);
                        split.push(other);
                    } else {
                        split.push(w);
                    }
                }
                pending = split;
            }
            next.extend(pending);
        }
        factors = next;
    }
    factors
}

fn nullspace_mod(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][fc]) % p;
            }
            v
        })
        .collect()
}
