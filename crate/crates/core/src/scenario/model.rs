use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::document::{InitialSpec, RepresentationKind, RepresentationSpec, ScenarioDocument};
use crate::error::{Error, Result};
use crate::inference::{compose_question, Observable, StateVector, COEFFICIENT_NORM_TOL};
use crate::lie::{su_fundamental, AlgebraId, GeneratorSet};
use crate::reps::{
    adjoint_of, cartan_weights, casimir_scalar, conjugate_rep, quadratic_casimir, scalar_deviation,
    su2_spin_irrep, tensor_rep,
};

/// Explicit initial amplitudes may be off unit norm by this much; they are rescaled.
const EXPLICIT_NORM_TOL: f64 = 1e-6;

/// A question by name or as raw generator coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuestionRef {
    Name(String),
    Coefficients(Vec<f64>),
}

impl From<&str> for QuestionRef {
    fn from(s: &str) -> Self {
        QuestionRef::Name(s.to_string())
    }
}

impl fmt::Display for QuestionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuestionRef::Name(n) => f.write_str(n),
            QuestionRef::Coefficients(c) => {
                let parts: Vec<String> = c.iter().map(|x| format!("{x}")).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// A validated scenario: representation, named questions and initial state.
#[derive(Debug, Clone)]
pub struct Scenario {
    document: ScenarioDocument,
    algebra: AlgebraId,
    representation: GeneratorSet,
    /// Generator sets acting on one tensor factor only.
    factors: Option<[GeneratorSet; 2]>,
    question_names: Vec<String>,
    questions: BTreeMap<String, Observable>,
    initial_state: StateVector,
    warnings: Vec<String>,
}

fn build_rep(algebra: &AlgebraId, spec: &RepresentationSpec, path: &str) -> Result<GeneratorSet> {
    let n = match algebra {
        AlgebraId::Su(n) => *n,
        AlgebraId::Custom(name) => return Err(Error::UnknownAlgebra(name.clone())),
    };
    let kind = spec.effective_kind();
    if kind != RepresentationKind::Tensor && spec.tensor.is_some() {
        return Err(Error::validation(
            format!("{path}.tensor"),
            "only tensor representations have factors",
        ));
    }
    let rep = match kind {
        RepresentationKind::Fundamental => su_fundamental(n)?,
        RepresentationKind::Conjugate => conjugate_rep(&su_fundamental(n)?),
        RepresentationKind::Adjoint => adjoint_of(&su_fundamental(n)?)?,
        RepresentationKind::Spin => {
            if n != 2 {
                return Err(Error::validation(
                    format!("{path}.kind"),
                    "spin representations need su2",
                ));
            }
            let d_r = spec.d_r.ok_or_else(|| {
                Error::validation(format!("{path}.d_r"), "spin representations need d_r")
            })?;
            if d_r == 0 {
                return Err(Error::validation(
                    format!("{path}.d_r"),
                    "d_r must be at least 1",
                ));
            }
            su2_spin_irrep(d_r)?
        }
        RepresentationKind::Tensor => {
            let factors = spec
                .tensor
                .as_ref()
                .filter(|f| f.len() == 2)
                .ok_or_else(|| {
                    Error::validation(format!("{path}.tensor"), "tensor needs exactly two factors")
                })?;
            let left = build_rep(algebra, &factors[0], &format!("{path}.tensor[0]"))?;
            let right = build_rep(algebra, &factors[1], &format!("{path}.tensor[1]"))?;
            tensor_rep(&left, &right)?
        }
    };
    if let Some(d_r) = spec.d_r {
        if d_r != rep.d_r() {
            return Err(Error::validation(
                format!("{path}.d_r"),
                format!(
                    "representation has dimension {}, document says {d_r}",
                    rep.d_r()
                ),
            ));
        }
    }
    Ok(rep)
}

/// Builds and validates a scenario from its document.
pub fn load_scenario(document: ScenarioDocument) -> Result<Scenario> {
    let algebra: AlgebraId = document.algebra.parse()?;
    let representation = build_rep(&algebra, &document.representation, "representation")?;
    let d = representation.d();

    let factors = match (
        &document.representation.effective_kind(),
        &document.representation.tensor,
    ) {
        (RepresentationKind::Tensor, Some(f)) => {
            let left = build_rep(&algebra, &f[0], "representation.tensor[0]")?;
            let right = build_rep(&algebra, &f[1], "representation.tensor[1]")?;
            let one = |k| GeneratorSet::trivial(algebra.clone(), d, k);
            Some([
                tensor_rep(&left, &one(right.d_r()))?,
                tensor_rep(&one(left.d_r()), &right)?,
            ])
        }
        _ => None,
    };

    let mut by_index: Vec<(&String, usize)> = Vec::new();
    for (name, &index) in &document.options {
        let path = format!("options.{name}");
        check_name(name, &path)?;
        if index >= d {
            return Err(Error::validation(
                path,
                format!("index {index} is outside [0, {d})"),
            ));
        }
        if let Some((other, _)) = by_index.iter().find(|(_, i)| *i == index) {
            return Err(Error::validation(
                path,
                format!("index {index} is already used by `{other}`"),
            ));
        }
        by_index.push((name, index));
    }
    by_index.sort_by_key(|(_, i)| *i);

    let mut named: Vec<(String, Vec<f64>)> = by_index
        .iter()
        .map(|(name, index)| {
            let mut c = vec![0.0; d];
            c[*index] = 1.0;
            ((*name).clone(), c)
        })
        .collect();
    for (name, coeffs) in &document.derived {
        let path = format!("derived.{name}");
        check_name(name, &path)?;
        if document.options.contains_key(name) {
            return Err(Error::validation(path, "name is already an option"));
        }
        if coeffs.len() != d {
            let err = Error::LengthMismatch {
                expected: d,
                found: coeffs.len(),
            };
            return Err(Error::validation(path, err.to_string()));
        }
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > COEFFICIENT_NORM_TOL {
            return Err(Error::validation(
                path,
                Error::NotNormalized(norm).to_string(),
            ));
        }
        named.push((name.clone(), coeffs.clone()));
    }

    let mut question_names = Vec::new();
    let mut questions = BTreeMap::new();
    for (name, coeffs) in &named {
        questions.insert(
            name.clone(),
            compose_question(coeffs, &representation)?.named(name.clone()),
        );
        question_names.push(name.clone());
    }
    if let Some(factors) = &factors {
        for (k, set) in factors.iter().enumerate() {
            for (name, coeffs) in &named {
                let label = format!("{name}@{}", k + 1);
                questions.insert(
                    label.clone(),
                    compose_question(coeffs, set)?.named(label.clone()),
                );
                question_names.push(label);
            }
        }
    }

    let mut warnings = Vec::new();
    let d_r = representation.d_r();
    let initial_state = match &document.initial {
        InitialSpec::Uniform => StateVector::uniform(d_r)?,
        InitialSpec::Eigenstate { question, rank } => {
            let q = questions.get(question).ok_or_else(|| {
                Error::validation("initial.question", format!("unknown question `{question}`"))
            })?;
            let eig = q.eigen();
            let cluster = eig.clusters().get(*rank).ok_or_else(|| {
                Error::validation(
                    "initial.rank",
                    format!("`{question}` has {} distinct answers", eig.clusters().len()),
                )
            })?;
            if cluster.len() > 1 {
                warnings.push(format!(
                    "initial answer {} of `{question}` is {}-fold degenerate; using the first eigenvector",
                    eig.cluster_value(*rank),
                    cluster.len()
                ));
            }
            StateVector::new(eig.eigenvectors.column(cluster.start))?
        }
        InitialSpec::Explicit { amplitudes } => {
            if amplitudes.len() != d_r {
                return Err(Error::validation(
                    "initial.amplitudes",
                    format!("expected {d_r} amplitudes, found {}", amplitudes.len()),
                ));
            }
            let norm = crate::kernel::vec_norm(amplitudes);
            if (norm - 1.0).abs() > EXPLICIT_NORM_TOL {
                return Err(Error::validation(
                    "initial.amplitudes",
                    format!("amplitudes have norm {norm}, expected 1"),
                ));
            }
            StateVector::normalized(amplitudes.clone())?
        }
    };

    Ok(Scenario {
        document,
        algebra,
        representation,
        factors,
        question_names,
        questions,
        initial_state,
        warnings,
    })
}

fn check_name(name: &str, path: &str) -> Result<()> {
    if name.is_empty() || name.contains('@') {
        return Err(Error::validation(
            path,
            "names must be non-empty and must not contain `@`",
        ));
    }
    Ok(())
}

/// Parses and validates a JSON scenario document.
pub fn load_scenario_json(text: &str) -> Result<Scenario> {
    load_scenario(ScenarioDocument::from_json(text)?)
}

/// Looks up a named question or composes one from raw coefficients.
pub fn resolve_question(s: &Scenario, question: &QuestionRef) -> Result<Observable> {
    match question {
        QuestionRef::Name(name) => s
            .questions
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownName(name.clone())),
        QuestionRef::Coefficients(c) => compose_question(c, &s.representation),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptionInfo {
    pub name: String,
    pub index: usize,
}

/// Algebra and representation metadata for a scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioInfo {
    pub scenario: String,
    pub algebra: String,
    pub rank: Option<usize>,
    pub d: usize,
    pub d_r: usize,
    #[serde(rename = "T")]
    pub trace_index: f64,
    /// `C2` scalar when the representation is irreducible.
    pub c2: Option<f64>,
    /// Distinct `C2` eigenvalues, ascending.
    pub c2_spectrum: Vec<f64>,
    pub weights: Option<Vec<Vec<f64>>>,
    pub options: Vec<OptionInfo>,
    pub derived: BTreeMap<String, Vec<f64>>,
    pub questions: Vec<String>,
    pub initial: InitialSpec,
    pub warnings: Vec<String>,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.document.name
    }

    pub fn document(&self) -> &ScenarioDocument {
        &self.document
    }

    pub fn algebra(&self) -> &AlgebraId {
        &self.algebra
    }

    pub fn representation(&self) -> &GeneratorSet {
        &self.representation
    }

    /// Single-factor generator sets of a tensor scenario.
    pub fn factors(&self) -> Option<&[GeneratorSet; 2]> {
        self.factors.as_ref()
    }

    /// Options by index, then derived questions, then per-factor variants.
    pub fn question_names(&self) -> &[String] {
        &self.question_names
    }

    pub fn question(&self, name: &str) -> Option<&Observable> {
        self.questions.get(name)
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial_state
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn info(&self) -> ScenarioInfo {
        let rep = &self.representation;
        let c2m = quadratic_casimir(rep);
        let c2_spectrum = crate::kernel::hermitian_eigen(&crate::kernel::hermitize(&c2m))
            .map(|e| {
                (0..e.clusters().len())
                    .map(|k| e.cluster_value(k))
                    .collect()
            })
            .unwrap_or_default();
        let c2 = (scalar_deviation(&c2m) <= 1e-9 * casimir_scalar(&c2m).abs().max(1.0))
            .then(|| casimir_scalar(&c2m));
        let mut options: Vec<OptionInfo> = self
            .document
            .options
            .iter()
            .map(|(name, &index)| OptionInfo {
                name: name.clone(),
                index,
            })
            .collect();
        options.sort_by_key(|o| o.index);
        ScenarioInfo {
            scenario: self.name().to_string(),
            algebra: self.algebra.to_string(),
            rank: self.algebra.rank(),
            d: rep.d(),
            d_r: rep.d_r(),
            trace_index: rep.trace_index(),
            c2,
            c2_spectrum,
            weights: cartan_weights(rep).ok(),
            options,
            derived: self.document.derived.clone(),
            questions: self.question_names.clone(),
            initial: self.document.initial.clone(),
            warnings: self.warnings.clone(),
        }
    }
}
