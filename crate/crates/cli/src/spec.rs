//! State-spec documents.
//!
//! ```json
//! {"kind": "coherent", "alpha": [4.0, 0.0], "cutoff": 64, "tail_tol": 1e-10}
//! {"kind": "number", "M": 5, "cutoff": 16}
//! {"kind": "cat", "alpha": [4.0, 0.0]}
//! {"kind": "phase", "M": 20, "phi0": 0.7, "cutoff": 32}
//! {"kind": "pure", "amplitudes": [[1.0, 0.0], [0.0, 1.0]]}
//! {"kind": "mixed", "components": [{"weight": 0.5, "state": {"kind": "number", "M": 0}}, ...]}
//! {"kind": "density", "entries": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `cutoff` and `tail_tol` are optional
//! everywhere: number and phase states default to `cutoff = M`, coherent and
//! cat states to the smallest cutoff meeting `tail_tol` (default `1e-10`).
//! Mixture components inherit the outer values; when no cutoff is given the
//! components are built at the largest of their natural cutoffs.

use npwigner::fock::{
    density_from_pure, make_cat_state, make_cat_state_auto, make_coherent_state,
    make_coherent_state_auto, make_number_state, make_phase_state, mix, PureState,
    DEFAULT_TAIL_TOL,
};
use npwigner::{DensityMatrix, Error};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    #[serde(flatten)]
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateKind {
    Number {
        #[serde(rename = "M")]
        m: usize,
    },
    Coherent {
        alpha: [f64; 2],
    },
    Cat {
        alpha: [f64; 2],
    },
    Phase {
        #[serde(rename = "M")]
        m: usize,
        phi0: f64,
    },
    Pure {
        amplitudes: Vec<[f64; 2]>,
    },
    Mixed {
        components: Vec<MixtureComponent>,
    },
    Density {
        entries: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub state: StateSpec,
}

#[derive(Debug, Clone)]
pub struct BuiltState {
    pub rho: DensityMatrix,
    pub tail_mass: f64,
    pub tail_tol: f64,
}

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn from_pure(state: PureState, tail_tol: f64) -> BuiltState {
    BuiltState {
        tail_mass: state.tail_mass(),
        rho: density_from_pure(&state),
        tail_tol,
    }
}

impl StateSpec {
    pub fn tail_tol(&self) -> f64 {
        self.tail_tol.unwrap_or(DEFAULT_TAIL_TOL)
    }

    pub fn build(&self) -> Result<BuiltState, Error> {
        let tail_tol = self.tail_tol();
        match &self.kind {
            StateKind::Number { m } => Ok(from_pure(
                make_number_state(*m, self.cutoff.unwrap_or(*m))?,
                tail_tol,
            )),
            StateKind::Coherent { alpha } => {
                let state = match self.cutoff {
                    Some(c) => make_coherent_state(complex(*alpha), c, tail_tol)?,
                    None => make_coherent_state_auto(complex(*alpha), tail_tol)?,
                };
                Ok(from_pure(state, tail_tol))
            }
            StateKind::Cat { alpha } => {
                let state = match self.cutoff {
                    Some(c) => make_cat_state(complex(*alpha), c, tail_tol)?,
                    None => make_cat_state_auto(complex(*alpha), tail_tol)?,
                };
                Ok(from_pure(state, tail_tol))
            }
            StateKind::Phase { m, phi0 } => Ok(from_pure(
                make_phase_state(*m, *phi0, self.cutoff.unwrap_or(*m))?,
                tail_tol,
            )),
            StateKind::Pure { amplitudes } => {
                let mut amps: Vec<Complex64> = amplitudes.iter().copied().map(complex).collect();
                if let Some(c) = self.cutoff {
                    if c + 1 < amps.len() {
                        return Err(Error::CutoffMismatch {
                            expected: c,
                            found: amps.len().saturating_sub(1),
                        });
                    }
                    amps.resize(c + 1, Complex64::new(0.0, 0.0));
                }
                Ok(from_pure(PureState::from_amplitudes(amps)?, tail_tol))
            }
            StateKind::Mixed { components } => self.build_mixture(components, tail_tol),
            StateKind::Density { entries } => {
                let rows: Vec<Vec<Complex64>> = entries
                    .iter()
                    .map(|r| r.iter().copied().map(complex).collect())
                    .collect();
                let rho = DensityMatrix::from_entries(&rows, tail_tol)?;
                if let Some(c) = self.cutoff {
                    if c != rho.cutoff() {
                        return Err(Error::CutoffMismatch {
                            expected: c,
                            found: rho.cutoff(),
                        });
                    }
                }
                Ok(BuiltState {
                    tail_mass: (1.0 - rho.trace()).max(0.0),
                    rho,
                    tail_tol,
                })
            }
        }
    }

    fn build_mixture(
        &self,
        components: &[MixtureComponent],
        tail_tol: f64,
    ) -> Result<BuiltState, Error> {
        let inherit = |spec: &StateSpec, cutoff: Option<usize>| StateSpec {
            kind: spec.kind.clone(),
            cutoff: spec.cutoff.or(cutoff),
            tail_tol: spec.tail_tol.or(Some(tail_tol)),
        };
        let cutoff = match self.cutoff {
            Some(c) => c,
            None => {
                let mut natural = 0;
                for c in components {
                    natural = natural.max(inherit(&c.state, None).build()?.rho.cutoff());
                }
                natural
            }
        };
        let built: Vec<(f64, BuiltState)> = components
            .iter()
            .map(|c| Ok((c.weight, inherit(&c.state, Some(cutoff)).build()?)))
            .collect::<Result<_, Error>>()?;
        let refs: Vec<(f64, &DensityMatrix)> = built.iter().map(|(w, b)| (*w, &b.rho)).collect();
        let rho = mix(&refs)?;
        let tail_mass = built.iter().map(|(w, b)| w * b.tail_mass).sum();
        Ok(BuiltState {
            rho,
            tail_mass,
            tail_tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> StateSpec {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn parses_every_kind() {
        let s =
            parse(r#"{"kind": "coherent", "alpha": [4.0, 0.0], "cutoff": 64, "tail_tol": 1e-10}"#);
        assert_eq!(s.kind, StateKind::Coherent { alpha: [4.0, 0.0] });
        assert_eq!(s.cutoff, Some(64));
        assert_eq!(
            parse(r#"{"kind": "number", "M": 5}"#).kind,
            StateKind::Number { m: 5 }
        );
        assert_eq!(
            parse(r#"{"kind": "phase", "M": 20, "phi0": 0.7}"#).kind,
            StateKind::Phase { m: 20, phi0: 0.7 }
        );
        let mixed = parse(
            r#"{"kind": "mixed", "components": [
                {"weight": 0.3, "state": {"kind": "number", "M": 0}},
                {"weight": 0.7, "state": {"kind": "number", "M": 2}}]}"#,
        );
        let built = mixed.build().unwrap();
        assert_eq!(built.rho.diagonal(), vec![0.3, 0.0, 0.7]);
        assert!(serde_json::from_str::<StateSpec>(r#"{"kind": "squeezed"}"#).is_err());
    }

    #[test]
    fn default_cutoffs() {
        assert_eq!(
            parse(r#"{"kind": "number", "M": 5}"#)
                .build()
                .unwrap()
                .rho
                .cutoff(),
            5
        );
        assert_eq!(
            parse(r#"{"kind": "phase", "M": 3, "phi0": 1.0}"#)
                .build()
                .unwrap()
                .rho
                .cutoff(),
            3
        );
        let coh = parse(r#"{"kind": "coherent", "alpha": [4.0, 0.0]}"#)
            .build()
            .unwrap();
        assert!(coh.tail_mass < 1e-10);
        assert_eq!(
            coh.rho.cutoff(),
            npwigner::fock::coherent_min_cutoff(4.0, 1e-10).unwrap()
        );
    }

    #[test]
    fn mixture_uses_common_cutoff() {
        let s = parse(
            r#"{"kind": "mixed", "components": [
                {"weight": 0.5, "state": {"kind": "coherent", "alpha": [1.0, 0.0]}},
                {"weight": 0.5, "state": {"kind": "number", "M": 2}}]}"#,
        );
        let built = s.build().unwrap();
        assert_eq!(
            built.rho.cutoff(),
            npwigner::fock::coherent_min_cutoff(1.0, 1e-10).unwrap()
        );
        assert!((built.rho.trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_amplitudes_are_padded() {
        let s = parse(r#"{"kind": "pure", "amplitudes": [[1.0, 0.0], [0.0, 1.0]], "cutoff": 4}"#);
        let built = s.build().unwrap();
        assert_eq!(built.rho.cutoff(), 4);
        assert!((built.rho.get(0, 1).im + 0.5).abs() < 1e-15);
        let short =
            parse(r#"{"kind": "pure", "amplitudes": [[1.0, 0.0], [0.0, 1.0]], "cutoff": 0}"#);
        assert!(short.build().is_err());
    }

    #[test]
    fn non_hermitian_density_rejected() {
        let s = parse(
            r#"{"kind": "density", "entries": [[[0.5, 0.0], [0.1, 0.2]], [[0.1, 0.2], [0.5, 0.0]]]}"#,
        );
        assert!(matches!(s.build(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn echo_round_trips() {
        let s = parse(r#"{"kind": "cat", "alpha": [2.0, -1.0], "tail_tol": 1e-12}"#);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["kind"], "cat");
        assert_eq!(serde_json::from_value::<StateSpec>(v).unwrap(), s);
    }
}
