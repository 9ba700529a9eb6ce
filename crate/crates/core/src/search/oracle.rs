//! Brute-force provability for one-sided additive sequents over
//! `/\-`, `true-`, `\/`, `false`, and closed equality literals.

use thiserror::Error;

use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("`{0}` is not an additive formula")]
    NotAdditive(String),
}

pub fn is_additive(f: &Formula) -> bool {
    match f {
        Formula::AndNeg(a, b) | Formula::OrPos(a, b) => is_additive(a) && is_additive(b),
        Formula::TrueNeg | Formula::FalsePos => true,
        Formula::Eq(t, s) | Formula::Neq(t, s) => t.is_ground() && s.is_ground(),
        _ => false,
    }
}

/// Whether `⊢ Δ` is derivable. Every formula of Δ is tried as the
/// principal one, so the result does not rely on any admissibility
/// property.
pub fn additive_oracle(delta: &[Formula]) -> Result<bool, OracleError> {
    if let Some(f) = delta.iter().find(|f| !is_additive(f)) {
        return Err(OracleError::NotAdditive(f.to_string()));
    }
    Ok(derivable(delta))
}

fn derivable(delta: &[Formula]) -> bool {
    (0..delta.len()).any(|i| {
        let rest = || {
            let mut r = delta.to_vec();
            r.remove(i);
            r
        };
        match &delta[i] {
            Formula::TrueNeg => true,
            Formula::Eq(t, s) => t == s,
            Formula::Neq(t, s) => t != s,
            Formula::AndNeg(a, b) => {
                let mut left = rest();
                left.push((**a).clone());
                let mut right = rest();
                right.push((**b).clone());
                derivable(&left) && derivable(&right)
            }
            Formula::OrPos(a, b) => [a, b].iter().any(|x| {
                let mut next = rest();
                next.push((***x).clone());
                derivable(&next)
            }),
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn units() {
        assert!(additive_oracle(&[Formula::TrueNeg]).unwrap());
        assert!(!additive_oracle(&[Formula::FalsePos, Formula::FalsePos]).unwrap());
        assert!(!additive_oracle(&[]).unwrap());
    }

    #[test]
    fn literal_with_context() {
        let delta = [
            Formula::eq(c("a"), c("b")),
            Formula::and_neg(
                Formula::eq(c("a"), c("a")),
                Formula::or_pos(Formula::FalsePos, Formula::TrueNeg),
            ),
        ];
        assert!(additive_oracle(&delta).unwrap());
    }

    #[test]
    fn rejects_non_additive() {
        let f = Formula::and_pos(Formula::TrueNeg, Formula::TrueNeg);
        assert!(additive_oracle(&[f]).is_err());
    }
}
