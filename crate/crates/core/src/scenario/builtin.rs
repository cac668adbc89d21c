use std::collections::BTreeMap;

use super::document::{InitialSpec, RepresentationKind, RepresentationSpec, ScenarioDocument};
use super::model::{load_scenario, Scenario};
use crate::error::{Error, Result};
use crate::inference::normalize_coefficients;

/// Names of the scenarios shipped with the library.
pub const BUILTIN_SCENARIOS: [&str; 4] =
    ["child-su2", "adult-su3", "two-children-su2", "siblings-su2"];

const CHILD_DRINKS: [&str; 3] = ["cola", "apple-juice", "water"];
const ADULT_DRINKS: [&str; 8] = [
    "wine", "whisky", "beer", "coffee", "tea", "lemonade", "cola", "water",
];

fn options(names: &[&str]) -> BTreeMap<String, usize> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.to_string(), i))
        .collect()
}

fn child(name: &str, description: &str, representation: RepresentationSpec) -> ScenarioDocument {
    ScenarioDocument {
        name: name.into(),
        description: Some(description.into()),
        algebra: "su2".into(),
        representation,
        options: options(&CHILD_DRINKS),
        derived: BTreeMap::new(),
        initial: InitialSpec::Uniform,
    }
}

/// The document of a built-in scenario.
pub fn builtin_document(name: &str) -> Result<ScenarioDocument> {
    let doc = match name {
        "child-su2" => child(
            name,
            "A child choosing a drink, answering yes or no.",
            RepresentationSpec::of(RepresentationKind::Fundamental),
        ),
        "two-children-su2" => child(
            name,
            "Two children sharing a jug, each answering yes or no.",
            RepresentationSpec::tensor(
                RepresentationSpec::of(RepresentationKind::Fundamental),
                RepresentationSpec::of(RepresentationKind::Fundamental),
            ),
        ),
        "siblings-su2" => child(
            name,
            "A younger child (yes/no) and an older child (like/indifferent/dislike).",
            RepresentationSpec::tensor(
                RepresentationSpec::of(RepresentationKind::Fundamental),
                RepresentationSpec::spin(3),
            ),
        ),
        "adult-su3" => {
            let mut champagne = vec![0.0; 8];
            champagne[0] = 0.95;
            champagne[5] = 0.312;
            let mut lager = vec![0.0; 8];
            lager[2] = -1.0;
            ScenarioDocument {
                name: name.into(),
                description: Some("An adult choosing a drink.".into()),
                algebra: "su3".into(),
                representation: RepresentationSpec::of(RepresentationKind::Fundamental),
                options: options(&ADULT_DRINKS),
                derived: BTreeMap::from([
                    ("champagne".to_string(), normalize_coefficients(&champagne)?),
                    ("lager".to_string(), lager),
                ]),
                initial: InitialSpec::Uniform,
            }
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(doc)
}

pub fn builtin_scenario(name: &str) -> Result<Scenario> {
    load_scenario(builtin_document(name)?)
}
