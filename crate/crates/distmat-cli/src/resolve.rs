//! Resolution of instance/matching/order arguments.
//!
//! An instance argument is either a built-in fixture name (`fig1`, `fig3a`,
//! ...) or a path to an instance file. Matching and order arguments may
//! name a fixture reference (`wavy`, `optimal`, `adversarial`, ...) when
//! the instance is a fixture, or a file path otherwise.

use std::fs;
use std::path::Path;

use distmat::core::{
    digest, parse_edge_list, parse_instance, parse_matching, serialize_instance, EdgeId, Instance,
    Matching,
};
use distmat::gen::{fixture, fixture_names, Fixture};
use distmat::{Error, Result};

pub struct LoadedInstance {
    pub name: String,
    pub instance: Instance,
    pub loops: Vec<usize>,
    pub fixture: Option<Fixture>,
}

impl LoadedInstance {
    /// Digest of the canonical serialization (independent of the input
    /// file's formatting).
    pub fn digest(&self) -> String {
        digest(serialize_instance(&self.instance, &self.loops, &[]).as_bytes())
    }
}

pub fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
}

pub fn load_instance(arg: &str) -> Result<LoadedInstance> {
    if fixture_names().contains(&arg) {
        let fx = fixture(arg)?;
        return Ok(LoadedInstance {
            name: arg.to_string(),
            instance: fx.instance.clone(),
            loops: Vec::new(),
            fixture: Some(fx),
        });
    }
    let text = read_file(arg)?;
    let parsed = parse_instance(&text)?;
    let name = Path::new(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    Ok(LoadedInstance {
        name,
        instance: parsed.instance,
        loops: parsed.loops,
        fixture: None,
    })
}

pub fn load_matching(arg: &str, loaded: &LoadedInstance) -> Result<Matching> {
    if let Some(fx) = &loaded.fixture {
        if fx.reference_names().contains(&arg) {
            return Ok(fx.reference(arg)?.clone());
        }
    }
    let text = read_file(arg)?;
    parse_matching(&text, &loaded.instance)
}

pub fn load_order(arg: &str, loaded: &LoadedInstance) -> Result<Vec<EdgeId>> {
    if let Some(fx) = &loaded.fixture {
        if let Ok(order) = fx.order(arg) {
            return Ok(order.to_vec());
        }
    }
    let text = read_file(arg)?;
    parse_edge_list(&text, &loaded.instance)
}
