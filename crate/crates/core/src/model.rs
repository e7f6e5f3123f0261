//! A presentation together with an optional cycle class map.
//!
//! Every verdict in this crate is scoped to a named finite model; the model id travels into
//! reports so that a result is never mistaken for a statement about true Chow groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_and_kernel, Rational};
use crate::ring::{Element, GradedRing, LinearMapMatrix, RingMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Theta,
    Divisor,
    Cohomology,
    Sympow,
    Projective,
    Curve,
    Product,
    Bundle,
    Custom,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Theta => "theta",
            ModelKind::Divisor => "divisor",
            ModelKind::Cohomology => "cohomology",
            ModelKind::Sympow => "sympow",
            ModelKind::Projective => "projective",
            ModelKind::Curve => "curve",
            ModelKind::Product => "product",
            ModelKind::Bundle => "bundle",
            ModelKind::Custom => "custom",
        }
    }
}

/// A ring map into a cohomology-like target, sending codimension `p` to grade `scale * p`.
#[derive(Clone, Debug)]
pub struct CycleClass {
    pub target: GradedRing,
    pub map: RingMap,
}

#[derive(Clone, Debug)]
pub struct Model {
    id: String,
    kind: ModelKind,
    g: Option<u32>,
    ring: GradedRing,
    cycle_class: Option<CycleClass>,
}

impl Model {
    pub fn new(id: impl Into<String>, kind: ModelKind, g: Option<u32>, ring: GradedRing) -> Self {
        Model {
            id: id.into(),
            kind,
            g,
            ring,
            cycle_class: None,
        }
    }

    /// Attaches a cycle class map given by generator images in `target`.
    pub fn with_cycle_class(mut self, target: GradedRing, images: Vec<Element>, scale: u32) -> Result<Self> {
        let map = RingMap::new(&self.ring, &target, images, scale)?;
        self.cycle_class = Some(CycleClass { target, map });
        Ok(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn g(&self) -> Option<u32> {
        self.g
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> u32 {
        self.ring.truncation_dim()
    }

    pub fn ample(&self) -> Option<&Element> {
        self.ring.ample()
    }

    pub fn cycle_class(&self) -> Option<&CycleClass> {
        self.cycle_class.as_ref()
    }

    fn require_cl(&self) -> Result<&CycleClass> {
        self.cycle_class
            .as_ref()
            .ok_or_else(|| Error::NoCycleClass(self.id.clone()))
    }

    pub fn cl(&self, x: &Element) -> Result<Element> {
        let cl = self.require_cl()?;
        cl.map.apply(&self.ring, &cl.target, x)
    }

    pub fn cl_matrix(&self, p: u32) -> Result<LinearMapMatrix> {
        let cl = self.require_cl()?;
        cl.map.matrix(&self.ring, &cl.target, p)
    }

    /// Basis of `CH^p_hom = ker(cl)` in codimension `p`, as coordinate vectors in
    /// `graded_basis(p)`.
    pub fn hom_basis(&self, p: u32) -> Result<Vec<Vec<Rational>>> {
        let lm = self.cl_matrix(p)?;
        Ok(rank_and_kernel(&lm.matrix).1)
    }
}
