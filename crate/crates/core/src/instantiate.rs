//! Specializing parameterized trails and routeways, and the counterexample
//! detector.
//!
//! Hypotheses are labels whose truth under a specialization is declared by
//! the caller; nothing here evaluates statements.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::model::{is_symbol, ModelError, RouteUnit, Routeway, Substitution, Trail, Waypoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstantiateError {
    #[error("no binding for parameter(s) {0:?}")]
    MissingBinding(Vec<String>),
    #[error("binding for unknown parameter(s) {0:?}")]
    ExtraBinding(Vec<String>),
    #[error("trail `{0}` has no premise/conclusion templates")]
    NoTemplates(String),
    #[error("hypothesis `{hypothesis}` of trail `{trail}` has no declaration")]
    MissingHypothesisDeclaration { trail: String, hypothesis: String },
    #[error(
        "specialized unit {index} starts at `{found}` but the previous unit ends at `{expected}`"
    )]
    BrokenChainAfterSubstitution {
        index: usize,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl InstantiateError {
    pub fn code(&self) -> &'static str {
        match self {
            InstantiateError::MissingBinding(_) => "missing-binding",
            InstantiateError::ExtraBinding(_) => "extra-binding",
            InstantiateError::NoTemplates(_) => "no-templates",
            InstantiateError::MissingHypothesisDeclaration { .. } => {
                "missing-hypothesis-declaration"
            }
            InstantiateError::BrokenChainAfterSubstitution { .. } => {
                "broken-chain-after-substitution"
            }
            InstantiateError::Model(e) => e.code(),
        }
    }
}

/// A routeway whose statements mention free parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterizedRouteway {
    params: Vec<String>,
    routeway: Routeway,
    annotations: BTreeMap<String, String>,
}

impl ParameterizedRouteway {
    pub fn new<S: Into<String>>(
        params: impl IntoIterator<Item = S>,
        routeway: Routeway,
    ) -> Result<Self, InstantiateError> {
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        for (i, p) in params.iter().enumerate() {
            if !is_symbol(p) {
                return Err(ModelError::InvalidParameter(p.clone()).into());
            }
            if params[..i].contains(p) {
                return Err(ModelError::DuplicateBinding(p.clone()).into());
            }
        }
        Ok(Self {
            params,
            routeway,
            annotations: BTreeMap::new(),
        })
    }

    /// Free-text notes carried through specialization untouched.
    pub fn with_annotations(mut self, annotations: BTreeMap<String, String>) -> Self {
        self.annotations = annotations;
        self
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn routeway(&self) -> &Routeway {
        &self.routeway
    }

    pub fn annotations(&self) -> &BTreeMap<String, String> {
        &self.annotations
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every hypothesis was declared to hold.
    Valid,
    /// Some hypothesis was declared false, so no guarantee applies.
    Inconclusive,
    /// Hypotheses hold but the specialized statement was declared invalid.
    RefutesGeneral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisStatus {
    pub label: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailHypotheses {
    pub trail: String,
    pub hypotheses: Vec<HypothesisStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationResult {
    pub routeway: Routeway,
    pub hypothesis_status: Vec<TrailHypotheses>,
    pub verdict: Verdict,
    pub annotations: BTreeMap<String, String>,
}

impl SimulationResult {
    pub fn all_hypotheses_hold(&self) -> bool {
        self.hypothesis_status
            .iter()
            .flat_map(|t| &t.hypotheses)
            .all(|h| h.holds)
    }

    /// Records that the specialized conclusion is known to be false.
    pub fn declare_instance_invalid(&mut self) {
        if self.all_hypotheses_hold() {
            self.verdict = Verdict::RefutesGeneral;
        }
    }
}

/// Why the detector did not refute the general statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoRefutationReason {
    HypothesisNotSatisfied,
    InstanceValid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict", content = "reason")]
pub enum Detection {
    RefutesGeneral,
    NoRefutation(NoRefutationReason),
}

fn check_domain<'a>(
    params: impl IntoIterator<Item = &'a String> + Clone,
    s: &Substitution,
) -> Result<(), InstantiateError> {
    let missing: Vec<String> = params
        .clone()
        .into_iter()
        .filter(|p| s.get(p).is_none())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(InstantiateError::MissingBinding(missing));
    }
    let extra: Vec<String> = s
        .params()
        .filter(|k| !params.clone().into_iter().any(|p| p == k))
        .map(str::to_string)
        .collect();
    if !extra.is_empty() {
        return Err(InstantiateError::ExtraBinding(extra));
    }
    Ok(())
}

/// The instance of a templated trail under `s`.
///
/// Generated waypoints are named `<trail>.premise` and `<trail>.conclusion`.
pub fn instantiate_unit(t: &Arc<Trail>, s: &Substitution) -> Result<RouteUnit, InstantiateError> {
    let template = t
        .template()
        .ok_or_else(|| InstantiateError::NoTemplates(t.id().to_string()))?;
    check_domain(t.params(), s)?;
    let initial = Waypoint::new(
        format!("{}.premise", t.id()),
        template.premise.iter().map(|x| s.apply(x)).collect(),
    )?;
    let terminal = Waypoint::new(
        format!("{}.conclusion", t.id()),
        template.conclusion.iter().map(|x| s.apply(x)).collect(),
    )?;
    Ok(RouteUnit::new(initial, terminal, t.clone()).with_substitution(s.clone())?)
}

fn specialize_waypoint(w: &Waypoint, s: &Substitution) -> Waypoint {
    let mut out = w.with_statements(w.statements().iter().map(|x| s.apply(x)).collect());
    if let Some(d) = w.display() {
        out = out.with_display(s.apply(d));
    }
    out
}

/// Specializes every unit of `template` under `s`.
///
/// Units whose trail has templates are rebuilt from those templates with
/// the unit's own substitution composed with `s`, keeping the original
/// waypoint ids. Other units have `s` applied to their statements. The
/// specialized units must still chain.
pub fn instantiate_routeway(
    template: &ParameterizedRouteway,
    s: &Substitution,
    hypotheses_hold: &BTreeMap<String, bool>,
) -> Result<SimulationResult, InstantiateError> {
    check_domain(template.params(), s)?;
    let hypothesis_status = hypothesis_status(template.routeway().units(), hypotheses_hold)?;

    let mut units = Vec::with_capacity(template.routeway().len());
    for unit in template.routeway().units() {
        let specialized = match unit.trail() {
            Some(trail) if trail.template().is_some() => {
                let own = unit
                    .substitution()
                    .cloned()
                    .unwrap_or_else(|| Substitution::identity(trail.params()));
                let composed = own.compose(s);
                let inst = instantiate_unit(trail, &composed)?;
                let initial = unit
                    .initial()
                    .with_statements(inst.initial().statements().to_vec());
                let terminal = unit
                    .terminal()
                    .with_statements(inst.terminal().statements().to_vec());
                RouteUnit::from_parts(
                    initial,
                    terminal,
                    Some(trail.clone()),
                    Some(composed),
                    unit.is_two_way(),
                )
            }
            _ => {
                let mut u = unit.with_endpoints(
                    specialize_waypoint(unit.initial(), s),
                    specialize_waypoint(unit.terminal(), s),
                );
                if let Some(own) = unit.substitution() {
                    u = RouteUnit::from_parts(
                        u.initial().clone(),
                        u.terminal().clone(),
                        u.trail().cloned(),
                        Some(own.compose(s)),
                        u.is_two_way(),
                    );
                }
                u
            }
        };
        units.push(specialized);
    }
    for i in 1..units.len() {
        if units[i - 1].terminal() != units[i].initial() {
            return Err(InstantiateError::BrokenChainAfterSubstitution {
                index: i,
                expected: units[i - 1].terminal().statement_text(),
                found: units[i].initial().statement_text(),
            });
        }
    }
    let start = units
        .first()
        .map(|u| u.initial().clone())
        .unwrap_or_else(|| specialize_waypoint(template.routeway().start(), s));
    let routeway = Routeway::new(start, units)?;

    let verdict = if hypothesis_status
        .iter()
        .flat_map(|t| &t.hypotheses)
        .all(|h| h.holds)
    {
        Verdict::Valid
    } else {
        Verdict::Inconclusive
    };
    Ok(SimulationResult {
        routeway,
        hypothesis_status,
        verdict,
        annotations: template.annotations().clone(),
    })
}

fn hypothesis_status(
    units: &[RouteUnit],
    declared: &BTreeMap<String, bool>,
) -> Result<Vec<TrailHypotheses>, InstantiateError> {
    let mut out: Vec<TrailHypotheses> = Vec::new();
    for trail in units.iter().filter_map(RouteUnit::trail) {
        if out.iter().any(|t| t.trail == trail.id()) {
            continue;
        }
        out.push(TrailHypotheses {
            trail: trail.id().to_string(),
            hypotheses: trail_hypotheses(trail, declared)?,
        });
    }
    Ok(out)
}

fn trail_hypotheses(
    trail: &Trail,
    declared: &BTreeMap<String, bool>,
) -> Result<Vec<HypothesisStatus>, InstantiateError> {
    trail
        .hypotheses()
        .iter()
        .map(|h| match declared.get(h) {
            Some(&holds) => Ok(HypothesisStatus {
                label: h.clone(),
                holds,
            }),
            None => Err(InstantiateError::MissingHypothesisDeclaration {
                trail: trail.id().to_string(),
                hypothesis: h.clone(),
            }),
        })
        .collect()
}

/// Refutes the general statement of `t` exactly when all its hypotheses
/// hold under `s` and the specialized statement is declared invalid.
pub fn detect_counterexample(
    t: &Trail,
    s: &Substitution,
    hypotheses_hold: &BTreeMap<String, bool>,
    specialized_invalid: bool,
) -> Result<Detection, InstantiateError> {
    check_domain(t.params(), s)?;
    let status = trail_hypotheses(t, hypotheses_hold)?;
    Ok(if !status.iter().all(|h| h.holds) {
        Detection::NoRefutation(NoRefutationReason::HypothesisNotSatisfied)
    } else if specialized_invalid {
        Detection::RefutesGeneral
    } else {
        Detection::NoRefutation(NoRefutationReason::InstanceValid)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SingleApplication;

    fn scaling() -> Arc<Trail> {
        Arc::new(
            Trail::new("P", "multiplying both sides by a positive constant")
                .with_params(["x", "y", "c"])
                .unwrap()
                .with_hypotheses(["c>0"])
                .with_template(vec!["x<y".into(), "c>0".into()], vec!["cx<cy".into()])
                .unwrap(),
        )
    }

    fn bind(pairs: &[(&str, &str)]) -> Substitution {
        Substitution::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn scaling_instance_text() {
        let u = instantiate_unit(&scaling(), &bind(&[("x", "a"), ("y", "b"), ("c", "2")])).unwrap();
        assert_eq!(u.initial().statements(), ["a<b", "2>0"]);
        assert_eq!(u.terminal().statements(), ["2a<2b"]);
        assert_eq!(u.initial().id(), "P.premise");
        assert_eq!(u.single_application(), SingleApplication::Verified);
    }

    #[test]
    fn identity_reproduces_templates() {
        let u = instantiate_unit(&scaling(), &Substitution::identity(&["x", "y", "c"])).unwrap();
        assert_eq!(u.initial().statements(), ["x<y", "c>0"]);
        assert_eq!(u.terminal().statements(), ["cx<cy"]);
    }

    #[test]
    fn binding_errors() {
        assert_eq!(
            instantiate_unit(&scaling(), &bind(&[("x", "a")])),
            Err(InstantiateError::MissingBinding(vec![
                "y".into(),
                "c".into()
            ]))
        );
        assert_eq!(
            instantiate_unit(
                &scaling(),
                &bind(&[("x", "a"), ("y", "b"), ("c", "2"), ("z", "q")])
            ),
            Err(InstantiateError::ExtraBinding(vec!["z".into()]))
        );
        let plain = Arc::new(Trail::new("Q", "q"));
        assert_eq!(
            instantiate_unit(&plain, &Substitution::identity::<&str>(&[])),
            Err(InstantiateError::NoTemplates("Q".into()))
        );
    }

    fn inequality_chain() -> ParameterizedRouteway {
        let p = scaling();
        let pos = Arc::new(Trail::new("pos", "attach side condition"));
        let w0 = Waypoint::single("W0", "a<b");
        let w1 = Waypoint::new("W1", vec!["a<b".into(), "k>0".into()]).unwrap();
        let w2 = Waypoint::single("W2", "ka<kb");
        let units = vec![
            RouteUnit::new(w0, w1.clone(), pos),
            RouteUnit::new(w1, w2, p)
                .with_substitution(bind(&[("x", "a"), ("y", "b"), ("c", "k")]))
                .unwrap(),
        ];
        ParameterizedRouteway::new(["k"], Routeway::from_units(units).unwrap()).unwrap()
    }

    #[test]
    fn routeway_specialization() {
        let hyps = BTreeMap::from([("c>0".to_string(), true)]);
        let r = instantiate_routeway(&inequality_chain(), &bind(&[("k", "2")]), &hyps).unwrap();
        assert_eq!(r.verdict, Verdict::Valid);
        assert_eq!(r.routeway.end().statements(), ["2a<2b"]);
        assert_eq!(r.routeway.units()[1].initial().statements(), ["a<b", "2>0"]);
        assert_eq!(
            r.routeway.units()[1].single_application(),
            SingleApplication::Verified
        );
        assert_eq!(r.routeway.end().id(), "W2");
    }

    #[test]
    fn false_hypothesis_is_inconclusive() {
        let hyps = BTreeMap::from([("c>0".to_string(), false)]);
        let mut r =
            instantiate_routeway(&inequality_chain(), &bind(&[("k", "-1")]), &hyps).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        r.declare_instance_invalid();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn missing_hypothesis_declaration() {
        let err = instantiate_routeway(&inequality_chain(), &bind(&[("k", "2")]), &BTreeMap::new())
            .unwrap_err();
        assert_eq!(err.code(), "missing-hypothesis-declaration");
    }

    #[test]
    fn malformed_template_breaks_chain() {
        // the unit's declared terminal disagrees with what its template produces
        let p = scaling();
        let w1 = Waypoint::new("W1", vec!["a<b".into(), "k>0".into()]).unwrap();
        let w2 = Waypoint::single("W2", "ka<kb");
        let w3 = Waypoint::single("W3", "done");
        let q = Arc::new(Trail::new("Q", "q"));
        let units = vec![
            RouteUnit::new(w1, w2.clone(), p)
                .with_substitution(bind(&[("x", "a"), ("y", "b"), ("c", "j")]))
                .unwrap(),
            RouteUnit::new(w2, w3, q),
        ];
        let t =
            ParameterizedRouteway::new(["k", "j"], Routeway::from_units(units).unwrap()).unwrap();
        let hyps = BTreeMap::from([("c>0".to_string(), true)]);
        let err = instantiate_routeway(&t, &bind(&[("k", "2"), ("j", "3")]), &hyps).unwrap_err();
        assert_eq!(err.code(), "broken-chain-after-substitution");
    }

    #[test]
    fn detector_grid() {
        let p = scaling();
        let s = bind(&[("x", "a"), ("y", "b"), ("c", "2")]);
        for holds in [true, false] {
            for invalid in [true, false] {
                let hyps = BTreeMap::from([("c>0".to_string(), holds)]);
                let d = detect_counterexample(&p, &s, &hyps, invalid).unwrap();
                assert_eq!(d == Detection::RefutesGeneral, holds && invalid);
                if !holds {
                    assert_eq!(
                        d,
                        Detection::NoRefutation(NoRefutationReason::HypothesisNotSatisfied)
                    );
                }
            }
        }
    }
}
