use std::sync::Arc;

use super::{BaseField, ModelError, Substitution, Trail, Waypoint};

/// One displayed inference `initial =[trail]=> terminal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteUnit {
    initial: Waypoint,
    terminal: Waypoint,
    trail: Option<Arc<Trail>>,
    substitution: Option<Substitution>,
    two_way: bool,
}

/// Outcome of checking that a unit is a single application of its trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingleApplication {
    /// The trail's templates, instantiated, reproduce the unit.
    Verified,
    /// The trail carries no templates, so the check is accepted as declared.
    Unverifiable,
    /// The templates do not produce the unit's waypoints.
    Mismatch,
}

impl RouteUnit {
    pub fn new(initial: Waypoint, terminal: Waypoint, trail: Arc<Trail>) -> Self {
        Self {
            initial,
            terminal,
            trail: Some(trail),
            substitution: None,
            two_way: false,
        }
    }

    /// A unit whose trail has been omitted.
    pub fn defective(initial: Waypoint, terminal: Waypoint) -> Self {
        Self {
            initial,
            terminal,
            trail: None,
            substitution: None,
            two_way: false,
        }
    }

    pub fn with_substitution(mut self, substitution: Substitution) -> Result<Self, ModelError> {
        let trail = self
            .trail
            .as_ref()
            .ok_or(ModelError::SubstitutionWithoutTrail)?;
        trail.check_bindings(&substitution)?;
        self.substitution = Some(substitution);
        Ok(self)
    }

    pub fn two_way(mut self) -> Result<Self, ModelError> {
        if self.trail.is_none() {
            return Err(ModelError::TwoWayWithoutTrail);
        }
        self.two_way = true;
        Ok(self)
    }

    pub fn initial(&self) -> &Waypoint {
        &self.initial
    }

    pub fn terminal(&self) -> &Waypoint {
        &self.terminal
    }

    pub fn trail(&self) -> Option<&Arc<Trail>> {
        self.trail.as_ref()
    }

    pub fn trail_id(&self) -> Option<&str> {
        self.trail.as_deref().map(Trail::id)
    }

    pub fn substitution(&self) -> Option<&Substitution> {
        self.substitution.as_ref()
    }

    pub fn is_two_way(&self) -> bool {
        self.two_way
    }

    pub fn is_defective(&self) -> bool {
        self.trail.is_none()
    }

    /// Template check for the single-application condition.
    ///
    /// Without an explicit substitution the trail's parameters are taken to
    /// stand for themselves. Defective units report `Mismatch`.
    pub fn single_application(&self) -> SingleApplication {
        let Some(trail) = &self.trail else {
            return SingleApplication::Mismatch;
        };
        let Some(template) = trail.template() else {
            return SingleApplication::Unverifiable;
        };
        let identity;
        let subst = match &self.substitution {
            Some(s) => s,
            None => {
                identity = Substitution::identity(trail.params());
                &identity
            }
        };
        let premise = self
            .initial
            .with_statements(template.premise.iter().map(|t| subst.apply(t)).collect());
        let conclusion = self
            .terminal
            .with_statements(template.conclusion.iter().map(|t| subst.apply(t)).collect());
        if premise == self.initial && conclusion == self.terminal {
            SingleApplication::Verified
        } else {
            SingleApplication::Mismatch
        }
    }

    /// Irreducible relative to `base`: not defective, trail in `base`, and
    /// the single-application check does not fail.
    pub fn is_irreducible(&self, base: &BaseField) -> bool {
        match &self.trail {
            None => false,
            Some(t) => {
                base.contains(t.id()) && self.single_application() != SingleApplication::Mismatch
            }
        }
    }

    /// Unchecked constructor for parts already validated elsewhere.
    pub(crate) fn from_parts(
        initial: Waypoint,
        terminal: Waypoint,
        trail: Option<Arc<Trail>>,
        substitution: Option<Substitution>,
        two_way: bool,
    ) -> RouteUnit {
        RouteUnit {
            initial,
            terminal,
            trail,
            substitution,
            two_way,
        }
    }

    pub(crate) fn with_endpoints(&self, initial: Waypoint, terminal: Waypoint) -> RouteUnit {
        RouteUnit {
            initial,
            terminal,
            trail: self.trail.clone(),
            substitution: self.substitution.clone(),
            two_way: self.two_way,
        }
    }
}
