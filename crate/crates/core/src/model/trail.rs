use serde::Serialize;

use super::substitution::is_symbol;
use super::{ModelError, Substitution};

/// Premise and conclusion of a trail written in general route-unit form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailTemplate {
    pub premise: Vec<String>,
    pub conclusion: Vec<String>,
}

/// The explicit justification labelling a route unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trail {
    id: String,
    statement: String,
    params: Vec<String>,
    hypotheses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    template: Option<TrailTemplate>,
}

impl Trail {
    pub fn new(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            params: Vec::new(),
            hypotheses: Vec::new(),
            template: None,
        }
    }

    pub fn with_params<S: Into<String>>(
        mut self,
        params: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModelError> {
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        for (i, p) in params.iter().enumerate() {
            if !is_symbol(p) {
                return Err(ModelError::InvalidParameter(p.clone()));
            }
            if params[..i].contains(p) {
                return Err(ModelError::DuplicateParameter {
                    trail: self.id.clone(),
                    param: p.clone(),
                });
            }
        }
        self.params = params;
        Ok(self)
    }

    pub fn with_hypotheses<S: Into<String>>(
        mut self,
        hypotheses: impl IntoIterator<Item = S>,
    ) -> Self {
        self.hypotheses = hypotheses.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_template(
        mut self,
        premise: Vec<String>,
        conclusion: Vec<String>,
    ) -> Result<Self, ModelError> {
        if premise.is_empty() || conclusion.is_empty() {
            return Err(ModelError::EmptyTemplate(self.id));
        }
        self.template = Some(TrailTemplate {
            premise,
            conclusion,
        });
        Ok(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn statement(&self) -> &str {
        &self.statement
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn hypotheses(&self) -> &[String] {
        &self.hypotheses
    }

    pub fn template(&self) -> Option<&TrailTemplate> {
        self.template.as_ref()
    }

    /// Checks that `subst` binds exactly this trail's parameters.
    pub fn check_bindings(&self, subst: &Substitution) -> Result<(), ModelError> {
        let missing: Vec<String> = self
            .params
            .iter()
            .filter(|p| subst.get(p).is_none())
            .cloned()
            .collect();
        let extra: Vec<String> = subst
            .params()
            .filter(|p| !self.params.iter().any(|q| q == p))
            .map(str::to_string)
            .collect();
        if missing.is_empty() && extra.is_empty() {
            Ok(())
        } else {
            Err(ModelError::SubstitutionDomain {
                trail: self.id.clone(),
                missing,
                extra,
            })
        }
    }
}
