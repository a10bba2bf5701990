//! Interchangeable strategies looked up by name.
//!
//! A name may carry one argument after a colon, as in `fixed:120`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::detection::{CentroidOnly, LeafIntersection, StemEstimator};
use crate::segmentation::{ExcessGreen, Fixed, Ndvi, Otsu, Thresholder, Triangle, VegetationIndex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown {kind} '{name}' (known: {known})")]
    Unknown { kind: &'static str, name: String, known: String },
    #[error("invalid argument for {kind} '{name}': {reason}")]
    BadArgument { kind: &'static str, name: String, reason: String },
}

type Factory<T> = Box<dyn Fn(Option<&str>) -> Result<Arc<T>, String> + Send + Sync>;

/// Name-to-factory table for one strategy kind.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    factories: BTreeMap<&'static str, Factory<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            factories: BTreeMap::new(),
        }
    }

    pub fn register<F>(&mut self, name: &'static str, factory: F) -> &mut Self
    where
        F: Fn(Option<&str>) -> Result<Arc<T>, String> + Send + Sync + 'static,
    {
        self.factories.insert(name, Box::new(factory));
        self
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    /// Builds the strategy for `spec`, either `name` or `name:arg`.
    pub fn create(&self, spec: &str) -> Result<Arc<T>, RegistryError> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let factory = self.factories.get(name).ok_or_else(|| RegistryError::Unknown {
            kind: self.kind,
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        factory(arg).map_err(|reason| RegistryError::BadArgument {
            kind: self.kind,
            name: name.to_string(),
            reason,
        })
    }
}

fn no_arg(arg: Option<&str>) -> Result<(), String> {
    match arg {
        None => Ok(()),
        Some(a) => Err(format!("takes no argument, got '{a}'")),
    }
}

pub fn thresholders() -> Registry<dyn Thresholder> {
    let mut r = Registry::<dyn Thresholder>::new("thresholder");
    r.register("otsu", |a| no_arg(a).map(|_| Arc::new(Otsu) as Arc<dyn Thresholder>))
        .register("triangle", |a| no_arg(a).map(|_| Arc::new(Triangle) as Arc<dyn Thresholder>))
        .register("fixed", |a| {
            let a = a.ok_or("expects a bin index, as in fixed:120")?;
            let t: u8 = a.parse().map_err(|_| format!("'{a}' is not a bin index in 0..=255"))?;
            Ok(Arc::new(Fixed(t)) as Arc<dyn Thresholder>)
        });
    r
}

pub fn indices() -> Registry<dyn VegetationIndex> {
    let mut r = Registry::<dyn VegetationIndex>::new("vegetation index");
    r.register("exg", |a| no_arg(a).map(|_| Arc::new(ExcessGreen) as Arc<dyn VegetationIndex>))
        .register("ndvi", |a| no_arg(a).map(|_| Arc::new(Ndvi) as Arc<dyn VegetationIndex>));
    r
}

pub fn stem_estimators() -> Registry<dyn StemEstimator> {
    let mut r = Registry::<dyn StemEstimator>::new("stem estimator");
    r.register("leaves", |a| no_arg(a).map(|_| Arc::new(LeafIntersection) as Arc<dyn StemEstimator>))
        .register("centroid", |a| no_arg(a).map(|_| Arc::new(CentroidOnly) as Arc<dyn StemEstimator>));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(thresholders().create("otsu").unwrap().name(), "otsu");
        assert_eq!(thresholders().create("triangle").unwrap().name(), "triangle");
        assert_eq!(thresholders().create("fixed:120").unwrap().name(), "fixed:120");
        assert_eq!(indices().create("ndvi").unwrap().name(), "ndvi");
        assert_eq!(indices().create("exg").unwrap().name(), "exg");
        assert_eq!(stem_estimators().create("centroid").unwrap().name(), "centroid");
        assert_eq!(stem_estimators().create("leaves").unwrap().name(), "leaves");
    }

    #[test]
    fn bad_names_and_arguments() {
        let err = thresholders().create("kmeans").unwrap_err();
        assert_eq!(err.to_string(), "unknown thresholder 'kmeans' (known: fixed, otsu, triangle)");
        for bad in ["fixed", "fixed:256", "fixed:-1", "otsu:3"] {
            assert!(matches!(thresholders().create(bad), Err(RegistryError::BadArgument { .. })), "{bad}");
        }
    }

    #[test]
    fn custom_strategies_can_be_registered() {
        let mut r = thresholders();
        r.register("mid", |_| Ok(Arc::new(Fixed(128)) as Arc<dyn Thresholder>));
        assert_eq!(r.create("mid").unwrap().name(), "fixed:128");
    }
}
