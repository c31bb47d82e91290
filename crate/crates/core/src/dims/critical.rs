//! Weight one-half via Skoruppa's invariant-space formulas.

use crate::arith;
use crate::error::Result;
use crate::quadmod::FiniteQuadraticModule;
use crate::weilrep::{self, InvariantOptions};

#[derive(Debug, Clone, Copy)]
pub struct CriticalOptions {
    /// Skip terms that fail a necessary condition for invariants.
    pub prune: bool,
    /// Use `O(A⁻¹_{2l}) = {±1}` to cancel the two sums termwise.
    pub orthogonal_shortcut: bool,
    pub invariants: InvariantOptions,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        Self {
            prune: true,
            orthogonal_shortcut: true,
            invariants: InvariantOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermOutcome {
    /// `|A⁻¹_{2l} ⊕ ·|` is not a perfect square.
    NotSquare,
    /// The signature of the sum is not 0.
    NonzeroSignature(u8),
    /// `O(A⁻¹_{2l}) = {±1}`, so both constraints define the same space.
    OrthogonalShortcut,
    /// Dimensions under `ε × 1` and, for the cusp-form sum, under `O × 1`.
    Computed { epsilon: u64, orthogonal: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalTerm {
    pub l: u64,
    pub size: u64,
    pub outcome: TermOutcome,
}

impl CriticalTerm {
    fn contribution(&self) -> i64 {
        match self.outcome {
            TermOutcome::Computed { epsilon, orthogonal } => epsilon as i64 - orthogonal.unwrap_or(0) as i64,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalReport {
    /// Smallest `m` with `level(D) | 4m`.
    pub m: u64,
    pub terms: Vec<CriticalTerm>,
    pub value: u64,
}

fn index_m(module: &FiniteQuadraticModule) -> u64 {
    let n = module.level();
    n / num_integer::gcd(n, 4)
}

/// `l | m` with `m/l` squarefree.
fn admissible(m: u64) -> Vec<u64> {
    arith::divisors(m)
        .into_iter()
        .filter(|&l| arith::is_squarefree(m / l))
        .collect()
}

fn prune_reason(sum: &FiniteQuadraticModule) -> Result<Option<TermOutcome>> {
    if !arith::is_perfect_square(sum.size()) {
        return Ok(Some(TermOutcome::NotSquare));
    }
    let sig = sum.signature_by_components()?;
    if sig != 0 {
        return Ok(Some(TermOutcome::NonzeroSignature(sig)));
    }
    Ok(None)
}

/// `dim M_{1/2}(ρ_D) = Σ_l dim Inv(ρ_{A⁻¹_{2l} ⊕ D⁻¹})^{ε×1}`.
pub fn skoruppa_weight_half(module: &FiniteQuadraticModule) -> Result<u64> {
    Ok(skoruppa_weight_half_report(module, CriticalOptions::default())?.value)
}

pub fn skoruppa_weight_half_report(module: &FiniteQuadraticModule, opts: CriticalOptions) -> Result<CriticalReport> {
    let m = index_m(module);
    let dual = module.negated();
    let mut terms = Vec::new();
    for l in admissible(m) {
        let first = FiniteQuadraticModule::a_m(2 * l)?.negated();
        let sum = first.direct_sum(&dual);
        let pruned = if opts.prune { prune_reason(&sum)? } else { None };
        let outcome = match pruned {
            Some(reason) => reason,
            None => {
                let eps = weilrep::epsilon_on_first(&first, &dual);
                TermOutcome::Computed {
                    epsilon: weilrep::invariants_dim_with(&sum, &eps, opts.invariants)?,
                    orthogonal: None,
                }
            }
        };
        terms.push(CriticalTerm { l, size: sum.size(), outcome });
    }
    let value = terms.iter().map(CriticalTerm::contribution).sum::<i64>() as u64;
    Ok(CriticalReport { m, terms, value })
}

/// `dim S_{1/2}(ρ_D^*) = Σ_l [dim Inv(ρ_{A⁻¹_{2l} ⊕ D})^{ε×1} − dim Inv(ρ_{A⁻¹_{2l} ⊕ D})^{O(A⁻¹_{2l})×1}]`.
pub fn dim_s_half_dual(module: &FiniteQuadraticModule) -> Result<u64> {
    Ok(dim_s_half_dual_report(module, CriticalOptions::default())?.value)
}

pub fn dim_s_half_dual_report(module: &FiniteQuadraticModule, opts: CriticalOptions) -> Result<CriticalReport> {
    let m = index_m(module);
    let mut terms = Vec::new();
    for l in admissible(m) {
        let first = FiniteQuadraticModule::a_m(2 * l)?.negated();
        let sum = first.direct_sum(module);
        let pruned = if opts.prune { prune_reason(&sum)? } else { None };
        let outcome = match pruned {
            Some(reason) => reason,
            None => {
                let group = first.orthogonal_group()?;
                if opts.orthogonal_shortcut && group.is_plus_minus_one(&first) {
                    TermOutcome::OrthogonalShortcut
                } else {
                    let eps = weilrep::epsilon_on_first(&first, module);
                    let orth: Vec<Vec<u64>> = group
                        .elements()
                        .iter()
                        .map(|g| weilrep::act_on_first(&first, module, &g.permutation(&first)))
                        .collect();
                    TermOutcome::Computed {
                        epsilon: weilrep::invariants_dim_with(&sum, &eps, opts.invariants)?,
                        orthogonal: Some(weilrep::invariants_dim_with(&sum, &orth, opts.invariants)?),
                    }
                }
            }
        };
        terms.push(CriticalTerm { l, size: sum.size(), outcome });
    }
    let total: i64 = terms.iter().map(CriticalTerm::contribution).sum();
    Ok(CriticalReport {
        m,
        terms,
        value: u64::try_from(total).map_err(|_| {
            crate::error::Error::Mismatch(format!("negative dim S_1/2 = {total}"))
        })?,
    })
}
