//! Named sections on one model, kept over a common constant field.
//!
//! Lifting a graph may adjoin a square root. The book then moves the
//! model and every stored section into the larger field, so all entries
//! stay comparable.

use mwl_algebra::{Embedding, FieldSpec, UniPoly};

use crate::error::{CoreError, Result};
use crate::sections::Section;
use crate::weierstrass::WeierstrassModel;

#[derive(Clone, Debug)]
pub struct SectionBook {
    model: WeierstrassModel,
    base: FieldSpec,
    to_current: Embedding,
    entries: Vec<(String, Section)>,
    degree_cap: usize,
    extensions: Vec<String>,
}

impl SectionBook {
    pub fn new(model: WeierstrassModel, degree_cap: usize) -> Self {
        let base = model.field().clone();
        SectionBook {
            to_current: Embedding::identity(&base),
            base,
            model,
            entries: Vec::new(),
            degree_cap,
            extensions: Vec::new(),
        }
    }

    pub fn model(&self) -> &WeierstrassModel {
        &self.model
    }

    /// The field the model was declared over.
    pub fn base_field(&self) -> &FieldSpec {
        &self.base
    }

    /// Embedding of the declared field into the current one.
    pub fn embedding(&self) -> &Embedding {
        &self.to_current
    }

    /// Radicands adjoined so far, in order.
    pub fn extensions(&self) -> &[String] {
        &self.extensions
    }

    pub fn entries(&self) -> &[(String, Section)] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Result<&Section> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s)
            .ok_or_else(|| CoreError::Scenario(format!("unknown section {label:?}")))
    }

    /// Stores a section over the current field, replacing an older entry
    /// with the same label.
    pub fn insert(&mut self, label: &str, s: Section) -> Result<()> {
        if !self.model.contains(&s) {
            return Err(CoreError::Precondition(format!("{label} = {s} is not a section of {}", self.model)));
        }
        match self.entries.iter_mut().find(|(l, _)| l == label) {
            Some(e) => e.1 = s,
            None => self.entries.push((label.to_string(), s)),
        }
        Ok(())
    }

    /// Moves everything along `e`, whose source is the current field.
    pub fn extend(&mut self, e: &Embedding) {
        if e.target() == self.model.field() {
            return;
        }
        self.model = self.model.map_field(e);
        for (_, s) in self.entries.iter_mut() {
            *s = s.map_field(e);
        }
        self.to_current = self.to_current.then(e);
    }

    /// Lifts `x = c(t)`, with `c` over the declared field, and stores the
    /// positive lift under `label`. Returns `false` when the graph does not
    /// lift.
    pub fn lift(&mut self, label: &str, c: &UniPoly) -> Result<bool> {
        let c = if c.field() == &self.base {
            self.to_current.apply_poly(c)
        } else if c.field() == self.model.field() {
            c.clone()
        } else {
            return Err(CoreError::ModelMismatch);
        };
        let name = format!("r{}", self.extensions.len() + 1);
        let Some(lift) = crate::sections::section_from_graph(&self.model, &c, &name, self.degree_cap)? else {
            return Ok(false);
        };
        if let Some(ext) = &lift.extension {
            self.extend(&ext.embedding);
            self.extensions.push(format!("sqrt({})", lift.unit));
        }
        self.insert(label, lift.plus)?;
        Ok(true)
    }
}
