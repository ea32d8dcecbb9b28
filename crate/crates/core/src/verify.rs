use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graded_map::GradedLinearMap;
use crate::koszul::KoszulEngine;
use crate::linalg::Field;

/// Outcome of one structural identity over every degree the window allows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Where the identity failed, empty on success.
    pub failures: Vec<String>,
}

impl IdentityCheck {
    fn new(name: &str, failures: Vec<String>) -> Self {
        IdentityCheck {
            name: name.to_string(),
            passed: failures.is_empty(),
            failures,
        }
    }
}

/// The composite applying `maps[0]` first, multiplied from the far end.
fn power<F: Field>(maps: &[GradedLinearMap<F>]) -> Result<GradedLinearMap<F>> {
    let (last, rest) = maps.split_last().expect("nonempty chain");
    let mut acc = last.clone();
    for m in rest.iter().rev() {
        acc = m.then(&acc)?;
    }
    Ok(acc)
}

impl<F: Field> KoszulEngine<F> {
    /// `δ^s = 0` for `δ_L`, `δ_R`, `δ'_L`, `δ'_R` on every `J_n` with `s ≤ n ≤ D`.
    pub fn check_nilpotence(&self) -> Result<IdentityCheck> {
        let s = self.s();
        let d = self.max_degree();
        let left: Vec<_> = (1..=d).map(|n| self.delta_left(n)).collect::<Result<_>>()?;
        let right: Vec<_> = (1..=d).map(|n| self.delta_right(n)).collect::<Result<_>>()?;
        let bl: Vec<_> = (1..=d).map(|n| self.bimodule_delta_left(n)).collect::<Result<_>>()?;
        let br: Vec<_> = (1..=d).map(|n| self.bimodule_delta_right(n)).collect::<Result<_>>()?;
        let families = [("δ_L", &left), ("δ_R", &right), ("δ'_L", &bl), ("δ'_R", &br)];
        let mut failures = Vec::new();
        for (name, maps) in families {
            for n in s..=d {
                // maps[k] leaves J_{k+1}; the chain J_n → J_{n-s}
                let chain: Vec<_> = (0..s).map(|k| maps[n - 1 - k].clone()).collect();
                if !power(&chain)?.is_zero() {
                    failures.push(format!("{name}^{s} on J_{n}"));
                }
            }
        }
        Ok(IdentityCheck::new("delta nilpotence", failures))
    }

    /// `δ'_L δ'_R = δ'_R δ'_L` out of every `J_n` with `2 ≤ n ≤ D`.
    pub fn check_commutation(&self) -> Result<IdentityCheck> {
        let failures = (2..=self.max_degree())
            .into_par_iter()
            .map(|n| {
                let lr = self.bimodule_delta_left(n)?.then(&self.bimodule_delta_right(n - 1)?)?;
                let rl = self.bimodule_delta_right(n)?.then(&self.bimodule_delta_left(n - 1)?)?;
                Ok((!lr.sub(&rl)?.is_zero()).then(|| format!("J_{n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IdentityCheck::new("delta commutation", failures.into_iter().flatten().collect()))
    }

    /// `d'_i ∘ d'_{i+1} = 0` for every adjacent pair inside the window.
    pub fn check_d_prime_squared(&self) -> Result<IdentityCheck> {
        let top = self.top_index();
        let failures = if top < 2 {
            Vec::new()
        } else {
            self.build_complex(top)?.square_failures()?
        };
        Ok(IdentityCheck::new(
            "d' squared",
            failures.into_iter().map(|i| format!("d'_{i} d'_{}", i + 1)).collect(),
        ))
    }

    /// `d̃_i ∘ d̃_{i+1} = 0` for every adjacent pair inside the window.
    pub fn check_d_tilde_squared(&self) -> Result<IdentityCheck> {
        let top = self.top_index();
        let failures = if top < 2 {
            Vec::new()
        } else {
            self.contracted_complex(top)?.square_failures()?
        };
        Ok(IdentityCheck::new(
            "d~ squared",
            failures.into_iter().map(|i| format!("d~_{i} d~_{}", i + 1)).collect(),
        ))
    }

    /// `μ ∘ d'_1 = 0`.
    pub fn check_augmentation(&self) -> Result<IdentityCheck> {
        let ok = self.top_index() == 0 || self.build_complex(1)?.augmentation_vanishes()?;
        Ok(IdentityCheck::new(
            "mu d'_1",
            if ok { Vec::new() } else { vec!["K_1".to_string()] },
        ))
    }

    /// All five structural identities.
    pub fn verify_identities(&self) -> Result<Vec<IdentityCheck>> {
        Ok(vec![
            self.check_nilpotence()?,
            self.check_commutation()?,
            self.check_d_prime_squared()?,
            self.check_d_tilde_squared()?,
            self.check_augmentation()?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use crate::koszul::KoszulEngine;
    use crate::linalg::PrimeField;
    use crate::presentation::Presentation;

    #[test]
    fn identities_hold_on_yang_mills() {
        let e = KoszulEngine::rational(&Presentation::yang_mills(2).unwrap(), 6).unwrap();
        for check in e.verify_identities().unwrap() {
            assert!(check.passed, "{check:?}");
        }
    }

    #[test]
    fn identities_hold_over_prime_field() {
        let p = Presentation::parse("generators = a, b\ndegree = 3\nrel: a*b*a - 2*b*a*b\nrel: a*a*b").unwrap();
        let e = KoszulEngine::new(&p, PrimeField::new(7).unwrap(), 7).unwrap();
        assert!(e.verify_identities().unwrap().iter().all(|c| c.passed));
    }
}
