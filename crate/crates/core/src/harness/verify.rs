use std::collections::HashSet;
use std::fmt::Write as _;

use super::experiment::{build, count_built, GenParams, Shape};
use crate::constructions::{gen_unit_rich_grid, split_and_translate};
use crate::error::{Error, Result};
use crate::geometry::{format_rational, Rational};
use crate::layered::{for_each_chain, LayeredConfig};
use crate::richness::{check_richness_bound, stable_covering, DEFAULT_NODE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    ClosedForm,
    Floor,
    Covering,
    Richness,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::ClosedForm => "closed-form",
            Claim::Floor => "floor",
            Claim::Covering => "covering",
            Claim::Richness => "richness",
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Claim::ClosedForm,
            Claim::Floor,
            Claim::Covering,
            Claim::Richness,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown claim `{s}`")))
    }
}

/// What a claim is checked against.
#[derive(Clone, Debug)]
pub enum Target {
    Generator(GenParams),
    /// The split of the `n`-point unit-rich grid against itself at its
    /// popular distance, with relative `eps`.
    Split {
        n: usize,
        eps: Rational,
        seed: u64,
    },
    Config(LayeredConfig),
}

impl Target {
    fn label(&self) -> String {
        match self {
            Target::Generator(p) => format!("{} k={} n={}", p.id, p.k, p.n),
            Target::Split { n, eps, .. } => format!("split n={n} eps={}", format_rational(eps)),
            Target::Config(c) => c.summary(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub claim: Claim,
    pub target: String,
    pub pass: bool,
    pub computed: String,
    pub expected: String,
    pub details: String,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} {} on {}: computed {}, expected {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.target,
            self.computed,
            self.expected
        )?;
        f.write_str(&self.details)
    }
}

fn inapplicable(claim: Claim, target: &Target) -> Error {
    Error::InapplicableClaim {
        claim: claim.name().into(),
        target: target.label(),
    }
}

/// Runs the check matching `claim` on `target`. Inputs are never modified.
pub fn verify(target: &Target, claim: Claim) -> Result<VerifyReport> {
    let report = |pass, computed: String, expected: String, details: String| VerifyReport {
        claim,
        target: target.label(),
        pass,
        computed,
        expected,
        details,
    };
    match (claim, target) {
        (Claim::ClosedForm | Claim::Floor, Target::Generator(p)) => {
            let built = build(p)?;
            let want = if claim == Claim::ClosedForm {
                built.exact.clone()
            } else {
                built.floor.clone()
            };
            let want = want.ok_or_else(|| inapplicable(claim, target))?;
            let counts = count_built(&built)?;
            let pass = if claim == Claim::ClosedForm {
                counts.chains == want
            } else {
                counts.chains >= want
            };
            let noun = match built.shape {
                Shape::Chain(_) => "chains",
                Shape::Tree(_) => "embeddings",
            };
            let mut details = String::new();
            if let Some(s) = &built.split {
                writeln!(
                    details,
                    "split: original {} uncut {} preserved {}",
                    s.original, s.uncut, s.preserved
                )
                .unwrap();
            }
            let rel = if claim == Claim::ClosedForm {
                "="
            } else {
                ">="
            };
            Ok(report(
                pass,
                format!("{} {noun}", counts.chains),
                format!("{rel} {want}"),
                details,
            ))
        }
        (Claim::Floor, Target::Split { n, eps, seed }) => {
            let grid = gen_unit_rich_grid(*n)?;
            let s = split_and_translate(&grid.points, &grid.points, &grid.popular_d2, eps, *seed)?;
            let details = format!(
                "delta2 {} original {} uncut {} squares {}\n",
                format_rational(&grid.popular_d2),
                s.original,
                s.uncut,
                s.squares
            );
            Ok(report(
                s.meets_floor(),
                format!("{} preserved incidences", s.preserved),
                format!(">= {}", format_rational(&s.floor())),
                details,
            ))
        }
        (Claim::Covering, Target::Config(c)) => {
            verify_covering(c, &Rational::new(1.into(), 2.into()))
        }
        (Claim::Richness, Target::Config(c)) => {
            let mut pass = true;
            let mut details = String::new();
            let mut realized = 0;
            for i in 0..c.k() {
                let rep =
                    check_richness_bound(c.layer(i), c.layer(i + 1), &c.delta2()[i], c.mode())?;
                pass &= rep.holds;
                realized += rep.rows.len();
                writeln!(
                    details,
                    "layers {}-{}: {} richness values, I = {}, tightest ratio {:.4}",
                    i + 1,
                    i + 2,
                    rep.rows.len(),
                    rep.total_incidences,
                    rep.tightest
                )
                .unwrap();
            }
            Ok(report(
                pass,
                format!("{realized} realized richness values checked"),
                "r |S_r| <= I(P, S_r) <= I(P, Q) for each".into(),
                details,
            ))
        }
        _ => Err(inapplicable(claim, target)),
    }
}

/// The covering claim at a chosen `eps`: every chain of `c` is a chain of
/// some class, and no sequence is longer than the bound.
pub fn verify_covering(c: &LayeredConfig, eps: &Rational) -> Result<VerifyReport> {
    let cov = stable_covering(c, eps, DEFAULT_NODE_LIMIT)?;
    let bound = cov.length_bound(c.k());
    let too_long = cov
        .sequences
        .iter()
        .filter(|s| Rational::from_integer(s.len().into()) > bound)
        .count();
    let mut chains = HashSet::new();
    for_each_chain(c, |t| {
        chains.insert(t.to_vec());
    })?;
    let uncovered = chains
        .iter()
        .filter(|t| !cov.sequences.iter().any(|s| s.contains(t)))
        .count();
    let mut class_chains = HashSet::new();
    for s in &cov.sequences {
        for_each_chain(&c.restricted(&s.class), |t| {
            let orig: Vec<usize> = t.iter().zip(&s.class).map(|(&i, set)| set[i]).collect();
            class_chains.insert(orig);
        })?;
    }
    let pass = too_long == 0 && uncovered == 0 && class_chains == chains;
    Ok(VerifyReport {
        claim: Claim::Covering,
        target: c.summary(),
        pass,
        computed: format!(
            "{} sequences, {} chains, {} class chains, {uncovered} uncovered, {too_long} too long",
            cov.sequences.len(),
            chains.len(),
            class_chains.len()
        ),
        expected: format!(
            "every chain covered, lengths <= {}",
            format_rational(&bound)
        ),
        details: format!(
            "explored {} nodes at eps {}\n",
            cov.nodes,
            format_rational(eps)
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::int;
    use crate::harness::ConstructionId;

    fn gen(id: ConstructionId, k: usize, n: usize) -> Target {
        Target::Generator(GenParams {
            id,
            k,
            n,
            seed: 1,
            eps: 0.5,
        })
    }

    #[test]
    fn planar_closed_form() {
        let r = verify(&gen(ConstructionId::Planar, 2, 50), Claim::ClosedForm).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.computed, "2500 chains");
    }

    #[test]
    fn inapplicable_claims_are_errors() {
        assert!(matches!(
            verify(&gen(ConstructionId::Planar, 3, 10), Claim::ClosedForm),
            Err(Error::InapplicableClaim { .. })
        ));
        assert!(matches!(
            verify(&gen(ConstructionId::Planar, 2, 10), Claim::Covering),
            Err(Error::InapplicableClaim { .. })
        ));
    }

    #[test]
    fn split_floor() {
        let t = Target::Split {
            n: 100,
            eps: int(1),
            seed: 3,
        };
        assert!(verify(&t, Claim::Floor).unwrap().pass);
    }

    #[test]
    fn config_claims() {
        let c = crate::constructions::gen_orthogonal_circles(4, 2, 8).unwrap();
        let t = Target::Config(c);
        assert!(verify(&t, Claim::Richness).unwrap().pass);
        let r = verify(&t, Claim::Covering).unwrap();
        assert!(r.pass, "{r}");
    }
}
