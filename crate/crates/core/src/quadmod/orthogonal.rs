//! Orthogonal groups of finite quadratic modules by bounded brute force.

use num_integer::Integer;

use super::FiniteQuadraticModule;
use crate::error::{Error, Result};

pub const DEFAULT_CYCLIC_BOUND: u64 = 10_000;
pub const DEFAULT_GENERAL_BOUND: u64 = 1_000;

/// A group automorphism, stored as the images of the coordinate generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    images: Vec<u64>,
}

impl Automorphism {
    pub fn identity(module: &FiniteQuadraticModule) -> Self {
        Self {
            images: generators(module),
        }
    }

    /// Multiplication by `u` (an automorphism when `u` is a unit mod the exponent).
    pub fn scalar(module: &FiniteQuadraticModule, u: i64) -> Self {
        Self {
            images: generators(module)
                .into_iter()
                .map(|g| module.scale(u, g))
                .collect(),
        }
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn apply(&self, module: &FiniteQuadraticModule, x: u64) -> u64 {
        let orders = module.orders();
        let mut acc = vec![0u64; orders.len()];
        for (&c, &img) in module.coords(x).iter().zip(&self.images) {
            if c == 0 {
                continue;
            }
            for ((a, &y), &o) in acc.iter_mut().zip(&module.coords(img)).zip(orders) {
                *a = ((*a as u128 + c as u128 * y as u128) % o as u128) as u64;
            }
        }
        module.index(&acc)
    }

    /// The induced permutation of element indices.
    pub fn permutation(&self, module: &FiniteQuadraticModule) -> Vec<u64> {
        (0..module.size()).map(|x| self.apply(module, x)).collect()
    }
}

/// `O(D)`, listed explicitly.
#[derive(Debug, Clone)]
pub struct OrthogonalGroup {
    elements: Vec<Automorphism>,
    /// Units `u` realising each element, when computed by the cyclic fast path.
    units: Option<Vec<u64>>,
}

impl OrthogonalGroup {
    /// Cyclic modules use the unit test up to `cyclic_bound` elements; all
    /// others search generator images up to `general_bound` elements.
    pub fn compute(
        module: &FiniteQuadraticModule,
        cyclic_bound: u64,
        general_bound: u64,
    ) -> Result<Self> {
        let n = module.size();
        if module.is_cyclic() {
            if n > cyclic_bound {
                return Err(Error::Resource(format!(
                    "orthogonal group of {module}: |D| = {n} exceeds cyclic bound {cyclic_bound}"
                )));
            }
            return Ok(Self::cyclic(module));
        }
        if n > general_bound {
            return Err(Error::Resource(format!(
                "orthogonal group of {module}: |D| = {n} exceeds bound {general_bound}"
            )));
        }
        Ok(Self::general(module))
    }

    fn cyclic(module: &FiniteQuadraticModule) -> Self {
        let n = module.size();
        let qs = module.q_numerators();
        // x ↦ index of x·g for the generator g = (1, …, 1)
        let g = module.index(&vec![1; module.orders().len()]);
        let mut by_multiple = vec![0u64; n as usize];
        let mut cur = 0u64;
        for m in 0..n {
            by_multiple[m as usize] = cur;
            cur = module.add(cur, g);
        }
        let mut elements = Vec::new();
        let mut units = Vec::new();
        if n == 1 {
            return Self {
                elements: vec![Automorphism::identity(module)],
                units: Some(vec![1]),
            };
        }
        for u in (1..n).filter(|u| u.gcd(&n) == 1) {
            let preserves = (0..n).all(|m| {
                let um = ((u as u128 * m as u128) % n as u128) as usize;
                qs[by_multiple[m as usize] as usize] == qs[by_multiple[um] as usize]
            });
            if preserves {
                units.push(u);
                elements.push(Automorphism::scalar(module, u as i64));
            }
        }
        Self {
            elements,
            units: Some(units),
        }
    }

    fn general(module: &FiniteQuadraticModule) -> Self {
        let gens = generators(module);
        let n = module.size();
        let qs = module.q_numerators();
        let elem_orders: Vec<u64> = (0..n).map(|x| element_order(module, x)).collect();
        let mut found = Vec::new();
        let mut chosen = Vec::with_capacity(gens.len());
        search(module, &gens, &qs, &elem_orders, &mut chosen, &mut found);
        found.sort();
        Self {
            elements: found,
            units: None,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn units(&self) -> Option<&[u64]> {
        self.units.as_deref()
    }

    /// Whether the group is exactly `{±1}` (just `{1}` when `−1 = 1` on `D`).
    pub fn is_plus_minus_one(&self, module: &FiniteQuadraticModule) -> bool {
        let mut expected = vec![
            Automorphism::identity(module),
            Automorphism::scalar(module, -1),
        ];
        expected.sort();
        expected.dedup();
        let mut have = self.elements.clone();
        have.sort();
        have == expected
    }
}

fn generators(module: &FiniteQuadraticModule) -> Vec<u64> {
    let k = module.orders().len();
    (0..k)
        .map(|i| {
            let mut c = vec![0u64; k];
            c[i] = 1;
            module.index(&c)
        })
        .collect()
}

fn element_order(module: &FiniteQuadraticModule, x: u64) -> u64 {
    module
        .coords(x)
        .iter()
        .zip(module.orders())
        .fold(1u64, |acc, (&c, &o)| acc.lcm(&(o / o.gcd(&c))))
}

/// Backtracking over generator images. A map fixing every `q(g_i)` and
/// `b(g_i, g_j)` preserves `q` everywhere, and preserving a nondegenerate
/// form forces injectivity, so no bijectivity check is needed.
fn search(
    module: &FiniteQuadraticModule,
    gens: &[u64],
    qs: &[u64],
    elem_orders: &[u64],
    chosen: &mut Vec<u64>,
    found: &mut Vec<Automorphism>,
) {
    let i = chosen.len();
    if i == gens.len() {
        found.push(Automorphism {
            images: chosen.clone(),
        });
        return;
    }
    let gi = gens[i];
    let ord = module.orders()[i];
    for y in 0..module.size() {
        if ord % elem_orders[y as usize] != 0 || qs[y as usize] != qs[gi as usize] {
            continue;
        }
        let ok = (0..i).all(|j| module.b_numerator(y, chosen[j]) == module.b_numerator(gi, gens[j]));
        if ok {
            chosen.push(y);
            search(module, gens, qs, elem_orders, chosen, found);
            chosen.pop();
        }
    }
}
