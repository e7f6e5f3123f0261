//! Model specifications: short strings such as `theta:g=2` and JSON model files.

use std::collections::BTreeMap;
use std::path::Path;

use chowlab::abelian::{cohomology_model, divisor_model, theta_model};
use chowlab::constructions::{curve_model, projective_model};
use chowlab::sympow::{SymPowMode, SymPowRing};
use chowlab::{GeneratorSpec, GradedRing, Model, ModelKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Version of the model file and report file formats.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub lead: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_codim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
}

/// A ring presentation: generators, rewrite relations `lead -> rhs`, bounds and an
/// optional ample class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub truncation: u32,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<String>,
}

impl PresentationSpec {
    pub fn from_ring(ring: &GradedRing) -> Self {
        let names: Vec<&str> = ring.generators().iter().map(|g| g.name.as_str()).collect();
        PresentationSpec {
            truncation: ring.truncation_dim(),
            generators: ring.generators().to_vec(),
            relations: ring
                .relation_strings()
                .into_iter()
                .map(|(lead, rhs)| RelationSpec { lead, rhs })
                .collect(),
            bounds: ring
                .bounds()
                .iter()
                .map(|b| BoundSpec {
                    generators: b.generators.iter().map(|&i| names[i].to_string()).collect(),
                    max_codim: b.max_codim,
                    max_degree: b.max_degree,
                })
                .collect(),
            ample: ring.ample().map(|a| ring.format(a)),
        }
    }

    pub fn build(&self, label: &str) -> CliResult<GradedRing> {
        let mut b = GradedRing::builder(label, self.truncation);
        for g in &self.generators {
            b = b.generator(g.clone());
        }
        for r in &self.relations {
            b = b.relation(&r.lead, &r.rhs);
        }
        for bound in &self.bounds {
            let names: Vec<&str> = bound.generators.iter().map(String::as_str).collect();
            b = b.bound(&names, bound.max_codim, bound.max_degree);
        }
        if let Some(a) = &self.ample {
            b = b.ample(a);
        }
        Ok(b.build()?)
    }
}

/// The target of a cycle class map: a built-in model spec whose ring is used, or an
/// inline presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Named(String),
    Inline(PresentationSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleClassSpec {
    pub target: TargetSpec,
    /// Codimension `p` lands in grade `scale * p` of the target.
    pub scale: u32,
    /// Image of every generator, as an expression in the target.
    pub images: BTreeMap<String, String>,
}

/// Contents of a model file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpecFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default = "custom_kind")]
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<u32>,
    #[serde(flatten)]
    pub presentation: PresentationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_class: Option<CycleClassSpec>,
}

fn custom_kind() -> ModelKind {
    ModelKind::Custom
}

impl ModelSpecFile {
    pub fn from_model(model: &Model) -> Self {
        let ring = model.ring();
        let cycle_class = model.cycle_class().map(|cl| CycleClassSpec {
            target: TargetSpec::Inline(PresentationSpec::from_ring(&cl.target)),
            scale: cl.map.scale(),
            images: ring
                .generators()
                .iter()
                .zip(cl.map.images())
                .map(|(g, img)| (g.name.clone(), cl.target.format(img)))
                .collect(),
        });
        ModelSpecFile {
            schema_version: SCHEMA_VERSION,
            id: Some(model.id().to_string()),
            kind: model.kind(),
            g: model.g(),
            presentation: PresentationSpec::from_ring(ring),
            cycle_class,
        }
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let spec: ModelSpecFile = serde_json::from_str(text).map_err(|source| CliError::Json {
            origin: origin.to_string(),
            source,
        })?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "{origin}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
                spec.schema_version
            )));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model specs serialize")
    }

    pub fn to_model(&self, default_id: &str) -> CliResult<Model> {
        let id = self.id.clone().unwrap_or_else(|| default_id.to_string());
        let ring = self.presentation.build(&id)?;
        let model = Model::new(id.clone(), self.kind, self.g, ring);
        let Some(cl) = &self.cycle_class else {
            return Ok(model);
        };
        let target = match &cl.target {
            TargetSpec::Named(spec) => resolve(spec)?.ring().clone(),
            TargetSpec::Inline(p) => p.build(&format!("cl({id})"))?,
        };
        for name in cl.images.keys() {
            if !model.ring().generators().iter().any(|g| &g.name == name) {
                return Err(CliError::Usage(format!("cycle_class: unknown generator `{name}`")));
            }
        }
        let images = model
            .ring()
            .generators()
            .iter()
            .map(|g| {
                let expr = cl
                    .images
                    .get(&g.name)
                    .ok_or_else(|| CliError::Usage(format!("cycle_class: no image for `{}`", g.name)))?;
                Ok(target.parse(expr)?)
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(model.with_cycle_class(target, images, cl.scale)?)
    }
}

fn parse_params(kind: &str, rest: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("model `{kind}`: expected key=value, got `{part}`")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("model `{kind}`: `{k}` given twice")));
        }
    }
    Ok(out)
}

fn take_u32(params: &mut BTreeMap<String, String>, kind: &str, key: &str) -> CliResult<u32> {
    let v = params
        .remove(key)
        .ok_or_else(|| CliError::Usage(format!("model `{kind}` needs `{key}=`")))?;
    v.parse()
        .map_err(|_| CliError::Usage(format!("model `{kind}`: `{key}={v}` is not a non-negative integer")))
}

/// Resolves `theta:g=G`, `divisor:g=G`, `cohomology:g=G`, `sympow:g=G[,mode=theta|formal]`,
/// `projective:n=N`, `curve:q=Q` or `file:PATH`.
pub fn resolve(spec: &str) -> CliResult<Model> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    if kind == "file" {
        return load_file(Path::new(rest));
    }
    let mut params = parse_params(kind, rest)?;
    let model = match kind {
        "theta" => theta_model(take_u32(&mut params, kind, "g")?)?,
        "divisor" => divisor_model(take_u32(&mut params, kind, "g")?)?,
        "cohomology" => cohomology_model(take_u32(&mut params, kind, "g")?)?,
        "projective" => projective_model(take_u32(&mut params, kind, "n")?)?,
        "curve" => curve_model(take_u32(&mut params, kind, "q")?)?,
        "sympow" => {
            let g = take_u32(&mut params, kind, "g")?;
            let mode: SymPowMode = params.remove("mode").as_deref().unwrap_or("theta").parse()?;
            let s = SymPowRing::new(g, mode)?;
            match mode {
                SymPowMode::Theta => s.model()?,
                SymPowMode::Formal => Model::new(s.id(), ModelKind::Sympow, Some(g), s.ring().clone()),
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown model kind `{other}` (expected theta, divisor, cohomology, sympow, projective, curve or file)"
            )))
        }
    };
    if let Some(k) = params.keys().next() {
        return Err(CliError::Usage(format!("model `{kind}`: unknown parameter `{k}`")));
    }
    Ok(model)
}

pub fn load_file(path: &Path) -> CliResult<Model> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let origin = path.display().to_string();
    ModelSpecFile::parse(&text, &origin)?.to_model(&format!("file:{origin}"))
}
