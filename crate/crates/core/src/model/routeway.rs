use super::{BaseField, ModelError, RouteUnit, Waypoint};

/// A finite chain of route units, the terminal waypoint of each unit being
/// the initial waypoint of the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Routeway {
    start: Waypoint,
    end: Waypoint,
    units: Vec<RouteUnit>,
}

impl Routeway {
    /// The empty routeway `A ⇝ A`.
    pub fn empty(at: Waypoint) -> Self {
        Self {
            end: at.clone(),
            start: at,
            units: Vec::new(),
        }
    }

    /// Chains `units` starting at `start`.
    pub fn new(start: Waypoint, units: Vec<RouteUnit>) -> Result<Self, ModelError> {
        let mut at = &start;
        for (index, unit) in units.iter().enumerate() {
            if unit.initial() != at {
                return Err(ModelError::BrokenChain {
                    index,
                    expected: at.statement_text(),
                    found: unit.initial().statement_text(),
                });
            }
            at = unit.terminal();
        }
        let end = at.clone();
        Ok(Self { start, end, units })
    }

    /// Chains a nonempty list of units.
    pub fn from_units(units: Vec<RouteUnit>) -> Result<Self, ModelError> {
        let start = units
            .first()
            .ok_or(ModelError::EmptyUnitList)?
            .initial()
            .clone();
        Self::new(start, units)
    }

    pub fn single(unit: RouteUnit) -> Self {
        Self {
            start: unit.initial().clone(),
            end: unit.terminal().clone(),
            units: vec![unit],
        }
    }

    pub fn start(&self) -> &Waypoint {
        &self.start
    }

    pub fn end(&self) -> &Waypoint {
        &self.end
    }

    pub fn units(&self) -> &[RouteUnit] {
        &self.units
    }

    pub fn into_units(self) -> Vec<RouteUnit> {
        self.units
    }

    /// Number of route units.
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// `A_0, A_1, ..., A_n`.
    pub fn waypoints(&self) -> Vec<&Waypoint> {
        std::iter::once(&self.start)
            .chain(self.units.iter().map(RouteUnit::terminal))
            .collect()
    }

    pub fn contains_waypoint(&self, w: &Waypoint) -> bool {
        self.start == *w || self.units.iter().any(|u| u.terminal() == w)
    }

    /// `self` followed by `next`.
    pub fn concat(&self, next: &Routeway) -> Result<Routeway, ModelError> {
        if self.end != next.start {
            return Err(ModelError::EndpointMismatch {
                left: self.end.statement_text(),
                right: next.start.statement_text(),
            });
        }
        let mut units = self.units.clone();
        units.extend(next.units.iter().cloned());
        Ok(Routeway {
            start: self.start.clone(),
            end: next.end.clone(),
            units,
        })
    }

    /// Units `range` as a routeway of their own.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Routeway {
        let start = if range.start == 0 {
            self.start.clone()
        } else {
            self.units[range.start - 1].terminal().clone()
        };
        Routeway {
            end: if range.end == range.start {
                start.clone()
            } else {
                self.units[range.end - 1].terminal().clone()
            },
            start,
            units: self.units[range].to_vec(),
        }
    }

    /// Every unit is irreducible relative to `base`; vacuous when empty.
    pub fn is_irreducible(&self, base: &BaseField) -> bool {
        self.units.iter().all(|u| u.is_irreducible(base))
    }
}
