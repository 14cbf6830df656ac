use std::collections::BTreeMap;

use serde::Serialize;

use super::ModelError;

/// Bindings `u =: a` from formal parameter symbols to concrete terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Substitution {
    bindings: BTreeMap<String, String>,
}

impl Substitution {
    pub fn new<I, K, V>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut bindings = BTreeMap::new();
        for (k, v) in pairs {
            let (k, v) = (k.into(), v.into());
            if !is_symbol(&k) {
                return Err(ModelError::InvalidParameter(k));
            }
            if v.trim().is_empty() {
                return Err(ModelError::EmptyTerm(k));
            }
            if bindings.insert(k.clone(), v).is_some() {
                return Err(ModelError::DuplicateBinding(k));
            }
        }
        Ok(Self { bindings })
    }

    /// Maps every symbol to itself.
    pub fn identity<S: AsRef<str>>(params: &[S]) -> Self {
        Self {
            bindings: params
                .iter()
                .map(|p| (p.as_ref().to_string(), p.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn get(&self, param: &str) -> Option<&str> {
        self.bindings.get(param).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    /// Rewrites every bound term by applying `outer` to it.
    pub fn compose(&self, outer: &Substitution) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .map(|(k, v)| (k.clone(), outer.apply(v)))
                .collect(),
        }
    }

    /// Simultaneous, token-based replacement of parameter occurrences.
    ///
    /// An identifier run (a letter or `_` followed by letters, digits or `_`)
    /// is rewritten when it is exactly a bound symbol, or when it splits
    /// completely into bound symbols written side by side (`cx` with `c` and
    /// `x` bound). Any other run is left untouched, so `exp` survives a
    /// binding for `x`. Replaced terms are never rescanned.
    pub fn apply(&self, text: &str) -> String {
        if self.bindings.is_empty() {
            return text.to_string();
        }
        let mut out = String::with_capacity(text.len());
        let mut rest = text;
        while let Some((start, c)) = rest.char_indices().next() {
            debug_assert_eq!(start, 0);
            if is_symbol_start(c) {
                let end = rest
                    .char_indices()
                    .find(|&(_, ch)| !is_symbol_continue(ch))
                    .map(|(i, _)| i)
                    .unwrap_or(rest.len());
                let run = &rest[..end];
                match self.rewrite_run(run) {
                    Some(rewritten) => out.push_str(&rewritten),
                    None => out.push_str(run),
                }
                rest = &rest[end..];
            } else {
                out.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
        out
    }

    fn rewrite_run(&self, run: &str) -> Option<String> {
        if let Some(term) = self.bindings.get(run) {
            return Some(term.clone());
        }
        // Juxtaposition: split the run into bound symbols, preferring the
        // longest symbol at each position. next[i] is the end of the symbol
        // starting at byte i on some complete split.
        let len = run.len();
        let bounds: Vec<usize> = run
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(len))
            .collect();
        let mut next: Vec<Option<usize>> = vec![None; len + 1];
        for (k, &i) in bounds.iter().enumerate().rev().skip(1) {
            next[i] = bounds[k + 1..].iter().rev().copied().find(|&j| {
                (j == len || next[j].is_some()) && self.bindings.contains_key(&run[i..j])
            });
        }
        let mut out = String::new();
        let mut i = 0;
        while i < len {
            let j = next[i]?;
            out.push_str(&self.bindings[&run[i..j]]);
            i = j;
        }
        Some(out)
    }
}

pub(crate) fn is_symbol_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_symbol_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Whether `s` is a well-formed parameter or identifier symbol.
pub fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_symbol_start(c)) && chars.all(is_symbol_continue)
}
