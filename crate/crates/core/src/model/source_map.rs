use std::collections::BTreeMap;

use crate::diag::Span;

/// Source locations of model elements, keyed by a structural path built with
/// the helpers in [`key`]. A key maps to every span recorded for it so that
/// duplicate declarations can each be reported at their own location.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    spans: BTreeMap<String, Vec<Span>>,
}

impl SourceMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: String, span: Span) {
        self.spans.entry(key).or_default().push(span);
    }

    /// Span of the first element recorded under `key`.
    pub fn get(&self, key: &str) -> Option<Span> {
        self.spans.get(key).and_then(|v| v.first().copied())
    }

    /// Span of the `n`th element recorded under `key` (0-based).
    pub fn nth(&self, key: &str, n: usize) -> Option<Span> {
        self.spans.get(key).and_then(|v| v.get(n).copied())
    }

    /// First span found among `keys`, tried in order.
    pub fn first_of(&self, keys: &[String]) -> Option<Span> {
        keys.iter().find_map(|k| self.get(k))
    }

    pub fn merge(&mut self, other: SourceMap) {
        for (k, v) in other.spans {
            self.spans.entry(k).or_default().extend(v);
        }
    }

    /// Every key with all its spans, in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Span])> {
        self.spans.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Copies every entry whose key starts with `from`, replacing that prefix
    /// with `to`.
    pub fn copy_prefix(&mut self, source: &SourceMap, from: &str, to: &str) {
        for (k, v) in source.iter() {
            if let Some(rest) = k.strip_prefix(from) {
                self.spans.entry(format!("{to}{rest}")).or_default().extend_from_slice(v);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }
}

/// Key constructors. Keys are plain strings so that analyses can build them
/// without borrowing parser state.
pub mod key {
    pub fn enumeration(id: &str) -> String {
        format!("enum:{id}")
    }
    pub fn enum_value(id: &str, value: &str) -> String {
        format!("enum:{id}/value:{value}")
    }
    pub fn entity(id: &str) -> String {
        format!("entity:{id}")
    }
    pub fn attribute(entity: &str, attr: &str) -> String {
        format!("entity:{entity}/attr:{attr}")
    }
    pub fn attribute_type(entity: &str, attr: &str) -> String {
        format!("entity:{entity}/attr:{attr}/type")
    }
    pub fn constraint(entity: &str, attr: &str, index: usize) -> String {
        format!("entity:{entity}/attr:{attr}/constraint:{index}")
    }
    pub fn measure(entity: &str, attr: &str) -> String {
        format!("entity:{entity}/attr:{attr}/measure")
    }
    pub fn cluster(id: &str) -> String {
        format!("cluster:{id}")
    }
    pub fn cluster_member(id: &str, member: &str) -> String {
        format!("cluster:{id}/member:{member}")
    }
    pub fn actor(id: &str) -> String {
        format!("actor:{id}")
    }
    pub fn actor_is_a(id: &str) -> String {
        format!("actor:{id}/isA")
    }
    pub fn use_case(id: &str) -> String {
        format!("uc:{id}")
    }
    pub fn use_case_type(id: &str) -> String {
        format!("uc:{id}/type")
    }
    pub fn use_case_actor(id: &str, actor: &str) -> String {
        format!("uc:{id}/actor:{actor}")
    }
    pub fn data_source(id: &str) -> String {
        format!("uc:{id}/source")
    }
    pub fn operation(uc: &str, op: &str) -> String {
        format!("uc:{uc}/op:{op}")
    }
    pub fn predicate(uc: &str, op: &str, index: usize) -> String {
        format!("uc:{uc}/op:{op}/pred:{index}")
    }
    pub fn predicate_right(uc: &str, op: &str, index: usize) -> String {
        format!("uc:{uc}/op:{op}/pred:{index}/right")
    }
    pub fn group_by(uc: &str, op: &str) -> String {
        format!("uc:{uc}/op:{op}/groupBy")
    }
    pub fn swap(uc: &str, op: &str) -> String {
        format!("uc:{uc}/op:{op}/swap")
    }
    pub fn container(id: &str) -> String {
        format!("ui:{id}")
    }
    pub fn container_event(id: &str, event: &str) -> String {
        format!("ui:{id}/event:{event}")
    }
    pub fn component(container: &str, id: &str) -> String {
        format!("ui:{container}/comp:{id}")
    }
    pub fn component_type(container: &str, id: &str) -> String {
        format!("ui:{container}/comp:{id}/type")
    }
    pub fn binding(container: &str, id: &str) -> String {
        format!("ui:{container}/comp:{id}/binding")
    }
    pub fn navigation(container: &str, id: &str) -> String {
        format!("ui:{container}/comp:{id}/navigatesTo")
    }
    pub fn part(container: &str, comp: &str, index: usize) -> String {
        format!("ui:{container}/comp:{comp}/part:{index}")
    }
    pub fn action(container: &str, comp: &str, index: usize) -> String {
        format!("ui:{container}/comp:{comp}/action:{index}")
    }
    pub fn component_event(container: &str, comp: &str, event: &str) -> String {
        format!("ui:{container}/comp:{comp}/event:{event}")
    }
    pub fn extension(category: &str, id: &str) -> String {
        format!("vocab:{category}:{id}")
    }
}
