//! Dimensions of invariant subspaces `Inv(ρ_D)^H` for groups `H` of
//! isometries acting on `ℂ[D]` by permuting the basis.
//!
//! A vector fixed by `ρ(T)` is supported on the isotropic elements, and a
//! vector fixed by `H` is constant on `H`-orbits. On that subspace, with
//! orbit indicators as basis, `‖ρ(S)v − v‖² = 2·c*Kc` where
//! `K = G − (A + A*)/2`, `G = diag(|O|)` and `A = (⟨ρ(S)1_{O_j}, 1_{O_i}⟩)`.
//! `K` is positive semidefinite, so the invariants are exactly `ker K`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, Rational};
use crate::cyclotomic::{sqrt_integer, Cyclotomic};
use crate::error::{Error, Result};
use crate::quadmod::FiniteQuadraticModule;

/// Limits for [`invariants_dim_with`].
#[derive(Debug, Clone, Copy)]
pub struct InvariantOptions {
    /// Largest `|D|` whose elements are enumerated.
    pub max_size: u64,
    /// Largest orbit count for exact elimination over the cyclotomic field.
    /// Modular certificates of a zero-dimensional space are not limited.
    pub exact_bound: usize,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        Self {
            max_size: 1 << 20,
            exact_bound: 48,
        }
    }
}

/// `x ↦ −x` as a permutation of element indices.
pub fn negation(module: &FiniteQuadraticModule) -> Vec<u64> {
    (0..module.size()).map(|x| module.neg(x)).collect()
}

/// Extends a permutation `π` of `first` to `first ⊕ second` as `π × 1`.
pub fn act_on_first(first: &FiniteQuadraticModule, second: &FiniteQuadraticModule, perm: &[u64]) -> Vec<u64> {
    let m = second.size();
    let mut out = Vec::with_capacity((first.size() * m) as usize);
    for &img in perm {
        out.extend((0..m).map(|y| img * m + y));
    }
    out
}

/// The permutations `ε × 1` on `first ⊕ second`.
pub fn epsilon_on_first(first: &FiniteQuadraticModule, second: &FiniteQuadraticModule) -> Vec<Vec<u64>> {
    vec![act_on_first(first, second, &negation(first))]
}

/// Orbit representatives as a map element → orbit id, for the group
/// generated by `perms`.
fn orbits(n: usize, perms: &[Vec<u64>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in perms {
        for (x, &y) in p.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// `dim Inv(ρ_D)^H` with default limits; `H` is generated by `perms`.
pub fn invariants_dim(module: &FiniteQuadraticModule, perms: &[Vec<u64>]) -> Result<u64> {
    invariants_dim_with(module, perms, InvariantOptions::default())
}

pub fn invariants_dim_with(
    module: &FiniteQuadraticModule,
    perms: &[Vec<u64>],
    opts: InvariantOptions,
) -> Result<u64> {
    let n = module.size();
    if n > opts.max_size {
        return Err(Error::Resource(format!(
            "invariants of {module}: |D| = {n} exceeds {}",
            opts.max_size
        )));
    }
    let qs = module.q_numerators();
    for p in perms {
        if p.len() as u64 != n || p.iter().enumerate().any(|(x, &y)| qs[x] != qs[y as usize]) {
            return Err(Error::InvalidParameter(
                "constraint is not a q-preserving permutation of D".into(),
            ));
        }
    }
    let orbit_of = orbits(n as usize, perms);
    let mut ids = std::collections::BTreeMap::new();
    let mut members: Vec<Vec<u64>> = Vec::new();
    for x in 0..n {
        if qs[x as usize] != 0 {
            continue;
        }
        let id = *ids.entry(orbit_of[x as usize]).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[id].push(x);
    }
    let system = GramSystem::new(module, members);
    let k = system.members.len();
    let rank_mod_p = system.rank_mod_p();
    if rank_mod_p == k {
        return Ok(0);
    }
    if k > opts.exact_bound {
        return Err(Error::Resource(format!(
            "invariants of {module}: {k} orbits exceed the exact elimination bound {}",
            opts.exact_bound
        )));
    }
    let rank = exact_rank(system.exact());
    debug_assert!(rank >= rank_mod_p);
    Ok((k - rank) as u64)
}

struct GramSystem<'a> {
    module: &'a FiniteQuadraticModule,
    members: Vec<Vec<u64>>,
    /// Field of the entries of `K`.
    order: u64,
    /// `ζ_8^sig/√|D|` in `ℚ(ζ_order)`.
    scalar: Cyclotomic,
}

impl<'a> GramSystem<'a> {
    fn new(module: &'a FiniteQuadraticModule, members: Vec<Vec<u64>>) -> Self {
        let sig = module.signature().expect("nondegenerate module") as i64;
        let root = Cyclotomic::root_of_unity(8, sig);
        let sqrt = sqrt_integer(module.size());
        let order = module.level().lcm(&root.order()).lcm(&sqrt.order());
        let scalar = (&root.promote(order) * &sqrt.promote(order))
            .scalar_mul(&arith::rat(1, module.size() as i64));
        Self {
            module,
            members,
            order,
            scalar,
        }
    }

    /// Exponent histogram of `Σ_{y∈O_i, x∈O_j} e(b(x, y))` over `ζ_order`.
    fn pair_weights(&self, i: usize, j: usize) -> Vec<i64> {
        let step = self.order / self.module.level();
        let mut w = vec![0i64; self.order as usize];
        for &y in &self.members[i] {
            for &x in &self.members[j] {
                w[(self.module.b_numerator(x, y) * step) as usize] += 1;
            }
        }
        w
    }

    fn rank_mod_p(&self) -> usize {
        let k = self.members.len();
        let f = PrimeField::for_order(self.order);
        let c = f.eval(&self.scalar);
        let cbar = f.eval(&self.scalar.conj());
        let half = f.inv(2);
        let mut a = vec![vec![0u64; k]; k];
        let mut abar = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let w = self.pair_weights(i, j);
                let (mut s, mut sbar) = (0u64, 0u64);
                for (e, &cnt) in w.iter().enumerate() {
                    if cnt != 0 {
                        let cnt = cnt as u64 % f.p;
                        s = f.add(s, f.mul(cnt, f.root_pow(e as i64)));
                        sbar = f.add(sbar, f.mul(cnt, f.root_pow(-(e as i64))));
                    }
                }
                a[i][j] = f.mul(c, s);
                abar[i][j] = f.mul(cbar, sbar);
            }
        }
        let mut m = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let sym = f.mul(half, f.add(a[i][j], abar[j][i]));
                let g = if i == j { self.members[i].len() as u64 % f.p } else { 0 };
                m[i][j] = f.sub(g, sym);
            }
        }
        f.rank(m)
    }

    fn exact(&self) -> Vec<Vec<Cyclotomic>> {
        let k = self.members.len();
        let a: Vec<Vec<Cyclotomic>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| &self.scalar * &Cyclotomic::from_exponent_weights(self.order, &self.pair_weights(i, j)))
                    .collect()
            })
            .collect();
        let half = arith::rat(1, 2);
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let sym = (&a[i][j] + &a[j][i].conj()).scalar_mul(&half);
                        let g = if i == j { self.members[i].len() as i64 } else { 0 };
                        &Cyclotomic::from_integer(self.order, g) - &sym
                    })
                    .collect()
            })
            .collect()
    }
}

/// Rank by Gaussian elimination with exact zero tests.
fn exact_rank(mut m: Vec<Vec<Cyclotomic>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        let pivot_row: Vec<Cyclotomic> = m[r].iter().map(|z| z * &inv).collect();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot_row[j]);
                }
            }
        }
        r += 1;
    }
    r
}

/// `𝔽_p` with `p ≡ 1 (mod n)` and a fixed primitive `n`-th root of unity `ω`,
/// so that `ζ_n ↦ ω` reduces `ℤ[ζ_n]` modulo a prime of degree one.
struct PrimeField {
    p: u64,
    n: u64,
    omega: u64,
}

impl PrimeField {
    fn for_order(n: u64) -> Self {
        let mut t = (1u64 << 62) / n;
        let p = loop {
            let cand = t * n + 1;
            if is_prime_u64(cand) {
                break cand;
            }
            t -= 1;
        };
        let primes: Vec<u64> = arith::factorize(n).into_iter().map(|(q, _)| q).collect();
        let mut f = Self { p, n, omega: 1 };
        for g in 2u64.. {
            let w = f.pow(g, (p - 1) / n);
            if primes.iter().all(|&q| f.pow(w, n / q) != 1) {
                f.omega = w;
                break;
            }
        }
        f
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn root_pow(&self, e: i64) -> u64 {
        self.pow(self.omega, e.rem_euclid(self.n as i64) as u64)
    }

    fn reduce_big(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }

    fn reduce_rational(&self, q: &Rational) -> u64 {
        let den = self.reduce_big(q.denom());
        assert!(den != 0, "denominator divisible by the auxiliary prime");
        self.mul(self.reduce_big(q.numer()), self.inv(den))
    }

    /// Image of `z ∈ ℚ(ζ_d)`, `d | n`, under `ζ_n ↦ ω`.
    fn eval(&self, z: &Cyclotomic) -> u64 {
        let z = z.promote(self.n);
        let mut acc = 0u64;
        for (i, c) in z.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = self.add(acc, self.mul(self.reduce_rational(c), self.root_pow(i as i64)));
            }
        }
        acc
    }

    fn rank(&self, mut m: Vec<Vec<u64>>) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, piv);
            let inv = self.inv(m[r][c]);
            for j in c..cols {
                m[r][j] = self.mul(m[r][j], inv);
            }
            for i in r + 1..rows {
                let f = m[i][c];
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let t = self.mul(f, m[r][j]);
                    m[i][j] = self.sub(m[i][j], t);
                }
            }
            r += 1;
        }
        r
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
