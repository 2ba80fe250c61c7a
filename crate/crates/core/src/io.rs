//! JSON input files for every structure the tools consume, plus writers
//! that serialize results back into the same formats.
//!
//! Files can reference each other: wherever a sub-document is expected, a
//! JSON string is read as a path relative to the referring file and a JSON
//! object as an inline block. Every file read is recorded in a
//! [`FileRegistry`] with its content hash so certificates can pin their
//! inputs.
//!
//! Formats, with simplex references written in the operator notation of
//! [`Presentation::display_ref`] (`"s1 s0 v"`, degeneracy letters strictly
//! decreasing):
//!
//! * presentation: `{"truncation": n, "generators": [[names per dim]],
//!   "faces": {"gen": ["d_0", ..., "d_k"]}}`. Names must be unique across
//!   the whole file; vertices take no faces entry, everything else needs
//!   exactly dim + 1 references to lower generators.
//! * category: `{"objects": [names], "morphisms": [{"name", "src",
//!   "dst"}], "composition": [["g", "f", "gf"]]}` where a triple records
//!   the composite g after f. The identity of object `a` must be listed as
//!   `id_a`; identity composites are implied.
//! * diagram: `{"category": <sub>, "objects": {"obj": <presentation>},
//!   "morphisms": {"f": [[image refs per source generator]]}}`. Identity
//!   morphisms are implied and may be omitted.
//! * diagram map: `{"source": <diagram>, "target": <diagram>,
//!   "components": {"obj": [[image refs per source generator]]}}`.
//! * group: `{"truncation": n, "constant": {"elements": [names], "mult":
//!   [[names]]}}`, or the levelwise form with `"levels"` (one table per
//!   dimension), `"faces"` (entry k lists the k + 2 face maps out of level
//!   k + 1 as element-name lists) and `"degeneracies"` (entry k lists the
//!   k + 1 degeneracy maps out of level k). The unit is inferred from the
//!   multiplication table.
//! * twisting: `{"values": {"gen": "element"}}` on non-degenerate base
//!   generators of positive dimension; omitted generators default to the
//!   unit.
//! * bundle: a container with optional `category` (defaults to the
//!   terminal category), `base`, `group`, `twisting`, `action`, and
//!   `perturbation` ({base simplex: group element}) fields. The action is
//!   `{"swap": true}` for the two-point swap action, `{"trivial": <diagram>}`
//!   for the trivial action on a space, or `{"space": <diagram>, "tables":
//!   {"obj": [{"element": {"simplex": "image"}} per dim]}}` with the unit
//!   rows implied.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bundle::{
    two_point_swap, BundleError, GroupAction, GroupTable, SimplicialGroup, TwistingFunction,
};
use crate::category::FiniteCategory;
use crate::diagram::{Diagram, DiagramMap};
use crate::simplicial::{GenId, Presentation, SimplexRef, SimplicialMap};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {why}")]
    Read { path: String, why: String },
    #[error("{path}: {why}")]
    Parse { path: String, why: String },
    #[error("{path}: {why} (at {token:?})")]
    Invalid { path: String, token: String, why: String },
}

fn invalid(path: &str, token: impl Into<String>, why: impl Into<String>) -> IoError {
    IoError::Invalid { path: path.to_string(), token: token.into(), why: why.into() }
}

/// Content hashes of every file read while loading, keyed by path.
#[derive(Debug, Clone, Default)]
pub struct FileRegistry {
    pub hashes: BTreeMap<String, String>,
}

impl FileRegistry {
    pub fn new() -> Self {
        FileRegistry::default()
    }
}

fn read_file(path: &Path, reg: &mut FileRegistry) -> Result<Vec<u8>, IoError> {
    let bytes = std::fs::read(path)
        .map_err(|e| IoError::Read { path: path.display().to_string(), why: e.to_string() })?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    reg.hashes.insert(path.display().to_string(), hex);
    Ok(bytes)
}

fn parse_doc<T: DeserializeOwned>(path: &Path, reg: &mut FileRegistry) -> Result<T, IoError> {
    let bytes = read_file(path, reg)?;
    serde_json::from_slice(&bytes)
        .map_err(|e| IoError::Parse { path: path.display().to_string(), why: e.to_string() })
}

/// A sub-document: a path string relative to the referring file, or an
/// inline block.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SourceDoc<T> {
    Path(String),
    Inline(T),
}

/// Runs `build` on the sub-document, reading and parsing it first when it
/// is a path. `dir` is the directory of the referring file and `label` its
/// path for error messages.
fn with_source<T: DeserializeOwned, R>(
    src: &SourceDoc<T>,
    dir: &Path,
    label: &str,
    reg: &mut FileRegistry,
    build: impl FnOnce(&T, &Path, &str, &mut FileRegistry) -> Result<R, IoError>,
) -> Result<R, IoError> {
    match src {
        SourceDoc::Inline(doc) => build(doc, dir, label, reg),
        SourceDoc::Path(p) => {
            let full = dir.join(p);
            let doc: T = parse_doc(&full, reg)?;
            let sub_dir = full.parent().map(Path::to_path_buf).unwrap_or_else(PathBuf::new);
            let sub_label = full.display().to_string();
            build(&doc, &sub_dir, &sub_label, reg)
        }
    }
}

fn dir_and_label(path: &Path) -> (PathBuf, String) {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(PathBuf::new);
    (dir, path.display().to_string())
}

/// Parses a simplex reference like `"s1 s0 v"` against a presentation.
/// The error carries the offending token.
pub fn parse_ref(p: &Presentation, s: &str) -> Result<SimplexRef, (String, String)> {
    let mut tokens: Vec<&str> = s.split_whitespace().collect();
    let Some(name) = tokens.pop() else {
        return Err((s.to_string(), "empty simplex reference".into()));
    };
    let base = p
        .generator_by_name(name)
        .ok_or((name.to_string(), "unknown generator".to_string()))?;
    let mut word = Vec::with_capacity(tokens.len());
    for t in tokens {
        let letter = t
            .strip_prefix('s')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or((t.to_string(), "expected a degeneracy token like s0".to_string()))?;
        word.push(letter);
    }
    if word.windows(2).any(|w| w[0] <= w[1]) {
        return Err((s.to_string(), "degeneracy word must strictly decrease".into()));
    }
    let r = SimplexRef { base, word };
    p.check_ref(&r).map_err(|e| (s.to_string(), e.to_string()))?;
    Ok(r)
}

fn parse_ref_in(p: &Presentation, s: &str, label: &str) -> Result<SimplexRef, IoError> {
    parse_ref(p, s).map_err(|(token, why)| invalid(label, token, why))
}

// ---------------------------------------------------------------------------
// Presentations

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    truncation: usize,
    generators: Vec<Vec<String>>,
    #[serde(default)]
    faces: BTreeMap<String, Vec<String>>,
}

fn presentation_from_doc(doc: &PresentationDoc, label: &str) -> Result<Arc<Presentation>, IoError> {
    if doc.generators.len() > doc.truncation + 1 {
        return Err(invalid(
            label,
            "generators",
            format!("more generator lists than the truncation {} admits", doc.truncation),
        ));
    }
    let mut seen = BTreeSet::new();
    for name in doc.generators.iter().flatten() {
        if !seen.insert(name.clone()) {
            return Err(invalid(label, name.clone(), "duplicate generator name"));
        }
    }
    for name in doc.faces.keys() {
        if !seen.contains(name) {
            return Err(invalid(label, name.clone(), "faces listed for an undeclared generator"));
        }
    }
    let mut p = Presentation::new(doc.truncation);
    for (dim, names) in doc.generators.iter().enumerate() {
        for name in names {
            if dim == 0 {
                if doc.faces.contains_key(name) {
                    return Err(invalid(label, name.clone(), "vertices take no faces entry"));
                }
                p.add_vertex(name.clone());
                continue;
            }
            let face_refs = doc
                .faces
                .get(name)
                .ok_or_else(|| invalid(label, name.clone(), "missing faces entry"))?;
            if face_refs.len() != dim + 1 {
                return Err(invalid(
                    label,
                    name.clone(),
                    format!("expected {} faces, found {}", dim + 1, face_refs.len()),
                ));
            }
            let faces = face_refs
                .iter()
                .map(|s| parse_ref_in(&p, s, label))
                .collect::<Result<Vec<_>, _>>()?;
            p.add_generator(name.clone(), faces)
                .map_err(|e| invalid(label, name.clone(), e.to_string()))?;
        }
    }
    p.validate().map_err(|e| invalid(label, "faces", e.to_string()))?;
    Ok(Arc::new(p))
}

pub fn load_presentation(path: &Path, reg: &mut FileRegistry) -> Result<Arc<Presentation>, IoError> {
    let doc: PresentationDoc = parse_doc(path, reg)?;
    presentation_from_doc(&doc, &path.display().to_string())
}

/// The presentation as a document in the input format.
pub fn presentation_doc(p: &Presentation) -> Value {
    let generators: Vec<Vec<String>> = (0..=p.truncation())
        .map(|d| p.generators(d).map(|g| p.generator_name(g).to_string()).collect())
        .collect();
    let mut faces = serde_json::Map::new();
    for d in 1..=p.truncation() {
        for g in p.generators(d) {
            let refs: Vec<String> =
                p.generator_faces(g).iter().map(|r| p.display_ref(r)).collect();
            faces.insert(p.generator_name(g).to_string(), json!(refs));
        }
    }
    json!({ "truncation": p.truncation(), "generators": generators, "faces": faces })
}

// ---------------------------------------------------------------------------
// Categories

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    name: String,
    src: String,
    dst: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    objects: Vec<String>,
    morphisms: Vec<MorphismDoc>,
    #[serde(default)]
    composition: Vec<[String; 3]>,
}

fn category_from_doc(doc: &CategoryDoc, label: &str) -> Result<Arc<FiniteCategory>, IoError> {
    let mut b = FiniteCategory::builder();
    let mut obj_of = BTreeMap::new();
    let mut mor_of: BTreeMap<String, usize> = BTreeMap::new();
    for name in &doc.objects {
        if obj_of.contains_key(name) {
            return Err(invalid(label, name.clone(), "duplicate object"));
        }
        let o = b.object(name.clone());
        obj_of.insert(name.clone(), o);
        mor_of.insert(format!("id_{name}"), b.identity_of(o));
    }
    let mut listed_ids = BTreeSet::new();
    for m in &doc.morphisms {
        let src = *obj_of
            .get(&m.src)
            .ok_or_else(|| invalid(label, m.src.clone(), "unknown source object"))?;
        let dst = *obj_of
            .get(&m.dst)
            .ok_or_else(|| invalid(label, m.dst.clone(), "unknown target object"))?;
        if m.name == format!("id_{}", m.src) && src == dst {
            listed_ids.insert(src);
            continue;
        }
        if mor_of.contains_key(&m.name) {
            return Err(invalid(label, m.name.clone(), "duplicate morphism name"));
        }
        mor_of.insert(m.name.clone(), b.morphism(m.name.clone(), src, dst));
    }
    for (name, &o) in &obj_of {
        if !listed_ids.contains(&o) {
            return Err(invalid(label, format!("id_{name}"), "identity morphism missing"));
        }
    }
    let identities: BTreeSet<usize> = (0..obj_of.len()).map(|o| b.identity_of(o)).collect();
    for [g, f, h] in &doc.composition {
        let gi = *mor_of.get(g).ok_or_else(|| invalid(label, g.clone(), "unknown morphism"))?;
        let fi = *mor_of.get(f).ok_or_else(|| invalid(label, f.clone(), "unknown morphism"))?;
        let hi = *mor_of.get(h).ok_or_else(|| invalid(label, h.clone(), "unknown morphism"))?;
        // Identity composites are implied; listed ones must agree.
        if identities.contains(&gi) || identities.contains(&fi) {
            let other = if identities.contains(&gi) { fi } else { gi };
            if hi != other {
                return Err(invalid(label, h.clone(), "identity composite must be the other leg"));
            }
            continue;
        }
        b.composite(gi, fi, hi);
    }
    let cat = b.finish().map_err(|e| invalid(label, "composition", e.to_string()))?;
    Ok(Arc::new(cat))
}

pub fn load_category(path: &Path, reg: &mut FileRegistry) -> Result<Arc<FiniteCategory>, IoError> {
    let doc: CategoryDoc = parse_doc(path, reg)?;
    category_from_doc(&doc, &path.display().to_string())
}

/// The category as a document in the input format.
pub fn category_doc(cat: &FiniteCategory) -> Value {
    let objects: Vec<String> =
        (0..cat.object_count()).map(|o| cat.object_name(o).to_string()).collect();
    let morphisms: Vec<Value> = (0..cat.morphism_count())
        .map(|m| {
            let mor = cat.morphism(m);
            json!({
                "name": mor.name,
                "src": cat.object_name(mor.src),
                "dst": cat.object_name(mor.dst),
            })
        })
        .collect();
    let mut composition = Vec::new();
    for g in 0..cat.morphism_count() {
        for f in 0..cat.morphism_count() {
            if cat.is_identity(g) || cat.is_identity(f) {
                continue;
            }
            if let Some(h) = cat.compose(g, f) {
                composition.push(json!([
                    cat.morphism(g).name,
                    cat.morphism(f).name,
                    cat.morphism(h).name,
                ]));
            }
        }
    }
    json!({ "objects": objects, "morphisms": morphisms, "composition": composition })
}

// ---------------------------------------------------------------------------
// Diagrams and maps of diagrams

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    category: SourceDoc<CategoryDoc>,
    objects: BTreeMap<String, SourceDoc<PresentationDoc>>,
    #[serde(default)]
    morphisms: BTreeMap<String, Vec<Vec<String>>>,
}

/// Parses per-dimension generator image tables into a simplicial map.
fn assignment_from_doc(
    source: &Arc<Presentation>,
    target: &Arc<Presentation>,
    table: &[Vec<String>],
    owner: &str,
    label: &str,
) -> Result<SimplicialMap, IoError> {
    let trunc = source.truncation();
    if table.len() > trunc + 1 {
        return Err(invalid(label, owner, "more image lists than dimensions"));
    }
    let mut assign: Vec<Vec<SimplexRef>> = Vec::with_capacity(trunc + 1);
    for dim in 0..=trunc {
        let want = source.generator_count(dim);
        let row = table.get(dim).map(Vec::as_slice).unwrap_or(&[]);
        if row.len() != want {
            return Err(invalid(
                label,
                owner,
                format!("dimension {dim} lists {} images for {want} generators", row.len()),
            ));
        }
        assign.push(row.iter().map(|s| parse_ref_in(target, s, label)).collect::<Result<_, _>>()?);
    }
    Ok(SimplicialMap::new(source.clone(), target.clone(), assign))
}

fn diagram_from_doc(
    doc: &DiagramDoc,
    dir: &Path,
    label: &str,
    reg: &mut FileRegistry,
) -> Result<Arc<Diagram>, IoError> {
    let diagram = diagram_from_doc_raw(doc, dir, label, reg)?;
    diagram.validate().map_err(|e| invalid(label, "morphisms", e.to_string()))?;
    Ok(diagram)
}

fn diagram_from_doc_raw(
    doc: &DiagramDoc,
    dir: &Path,
    label: &str,
    reg: &mut FileRegistry,
) -> Result<Arc<Diagram>, IoError> {
    let cat = with_source(&doc.category, dir, label, reg, |d, _, l, _| category_from_doc(d, l))?;
    let mut at = Vec::with_capacity(cat.object_count());
    for o in 0..cat.object_count() {
        let name = cat.object_name(o);
        let src = doc
            .objects
            .get(name)
            .ok_or_else(|| invalid(label, name, "object has no presentation"))?;
        at.push(with_source(src, dir, label, reg, |d, _, l, _| presentation_from_doc(d, l))?);
    }
    for name in doc.objects.keys() {
        if cat.object_by_name(name).is_none() {
            return Err(invalid(label, name.clone(), "presentation for an unknown object"));
        }
    }
    let mut act = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let mor = cat.morphism(m);
        if cat.is_identity(m) {
            if doc.morphisms.contains_key(&mor.name) {
                return Err(invalid(label, mor.name.clone(), "identity morphisms are implied"));
            }
            act.push(SimplicialMap::identity(at[mor.src].clone()));
            continue;
        }
        let table = doc
            .morphisms
            .get(&mor.name)
            .ok_or_else(|| invalid(label, mor.name.clone(), "morphism has no assignment"))?;
        act.push(assignment_from_doc(&at[mor.src], &at[mor.dst], table, &mor.name, label)?);
    }
    for name in doc.morphisms.keys() {
        if cat.morphism_by_name(name).is_none() {
            return Err(invalid(label, name.clone(), "assignment for an unknown morphism"));
        }
    }
    Ok(Arc::new(Diagram::new(cat, at, act)))
}

pub fn load_diagram(path: &Path, reg: &mut FileRegistry) -> Result<Arc<Diagram>, IoError> {
    let doc: DiagramDoc = parse_doc(path, reg)?;
    let (dir, label) = dir_and_label(path);
    diagram_from_doc(&doc, &dir, &label, reg)
}

/// Like [`load_diagram`] but without the final functoriality and
/// naturality check, so a caller can report that check as its verdict.
/// Per-map shape errors (wrong counts, refs outside the target) are still
/// input errors.
pub fn load_diagram_raw(path: &Path, reg: &mut FileRegistry) -> Result<Arc<Diagram>, IoError> {
    let doc: DiagramDoc = parse_doc(path, reg)?;
    let (dir, label) = dir_and_label(path);
    diagram_from_doc_raw(&doc, &dir, &label, reg)
}

/// The diagram as a document in the input format, all parts inline.
pub fn diagram_doc(d: &Diagram) -> Value {
    let cat = &d.cat;
    let mut objects = serde_json::Map::new();
    for o in 0..cat.object_count() {
        objects.insert(cat.object_name(o).to_string(), presentation_doc(d.value(o)));
    }
    let mut morphisms = serde_json::Map::new();
    for m in 0..cat.morphism_count() {
        if cat.is_identity(m) {
            continue;
        }
        let mor = cat.morphism(m);
        let map = d.action(m);
        let table: Vec<Vec<String>> = map
            .assignment()
            .iter()
            .map(|row| row.iter().map(|r| map.target.display_ref(r)).collect())
            .collect();
        morphisms.insert(mor.name.clone(), json!(table));
    }
    json!({
        "category": category_doc(cat),
        "objects": objects,
        "morphisms": morphisms,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    source: SourceDoc<DiagramDoc>,
    target: SourceDoc<DiagramDoc>,
    components: BTreeMap<String, Vec<Vec<String>>>,
}

fn map_from_doc(
    doc: &MapDoc,
    dir: &Path,
    label: &str,
    reg: &mut FileRegistry,
) -> Result<DiagramMap, IoError> {
    let source = with_source(&doc.source, dir, label, reg, diagram_from_doc)?;
    let target = with_source(&doc.target, dir, label, reg, diagram_from_doc)?;
    if source.cat != target.cat {
        return Err(invalid(label, "target", "source and target index different categories"));
    }
    let cat = &source.cat;
    let mut components = Vec::with_capacity(cat.object_count());
    for o in 0..cat.object_count() {
        let name = cat.object_name(o);
        let table = doc
            .components
            .get(name)
            .ok_or_else(|| invalid(label, name, "object has no component"))?;
        components.push(assignment_from_doc(source.value(o), target.value(o), table, name, label)?);
    }
    for name in doc.components.keys() {
        if cat.object_by_name(name).is_none() {
            return Err(invalid(label, name.clone(), "component for an unknown object"));
        }
    }
    let map = DiagramMap::new(source, target, components);
    map.validate().map_err(|e| invalid(label, "components", e.to_string()))?;
    Ok(map)
}

pub fn load_diagram_map(path: &Path, reg: &mut FileRegistry) -> Result<DiagramMap, IoError> {
    let doc: MapDoc = parse_doc(path, reg)?;
    let (dir, label) = dir_and_label(path);
    map_from_doc(&doc, &dir, &label, reg)
}

/// The map as a document in the input format, diagrams inline.
pub fn diagram_map_doc(m: &DiagramMap) -> Value {
    let cat = &m.source.cat;
    let mut components = serde_json::Map::new();
    for (o, comp) in m.components.iter().enumerate() {
        let table: Vec<Vec<String>> = comp
            .assignment()
            .iter()
            .map(|row| row.iter().map(|r| comp.target.display_ref(r)).collect())
            .collect();
        components.insert(cat.object_name(o).to_string(), json!(table));
    }
    json!({
        "source": diagram_doc(&m.source),
        "target": diagram_doc(&m.target),
        "components": components,
    })
}

/// Just the generator images of each component, for witnesses embedded in
/// larger reports.
pub fn components_doc(m: &DiagramMap) -> Value {
    let cat = &m.source.cat;
    let mut components = serde_json::Map::new();
    for (o, comp) in m.components.iter().enumerate() {
        let table: Vec<Vec<String>> = comp
            .assignment()
            .iter()
            .map(|row| row.iter().map(|r| comp.target.display_ref(r)).collect())
            .collect();
        components.insert(cat.object_name(o).to_string(), json!(table));
    }
    Value::Object(components)
}

// ---------------------------------------------------------------------------
// Groups

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelDoc {
    elements: Vec<String>,
    mult: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    truncation: usize,
    #[serde(default)]
    constant: Option<LevelDoc>,
    #[serde(default)]
    levels: Option<Vec<LevelDoc>>,
    #[serde(default)]
    faces: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    degeneracies: Option<Vec<Vec<Vec<String>>>>,
}

fn element_index(names: &[String], name: &str, label: &str) -> Result<usize, IoError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| invalid(label, name, "unknown group element"))
}

fn table_from_doc(doc: &LevelDoc, label: &str) -> Result<GroupTable, IoError> {
    let order = doc.elements.len();
    let mut seen = BTreeSet::new();
    for name in &doc.elements {
        if !seen.insert(name.clone()) {
            return Err(invalid(label, name.clone(), "duplicate element name"));
        }
    }
    if doc.mult.len() != order || doc.mult.iter().any(|row| row.len() != order) {
        return Err(invalid(label, "mult", "multiplication table is not square"));
    }
    let mut mult = vec![vec![0usize; order]; order];
    for (a, row) in doc.mult.iter().enumerate() {
        for (b, name) in row.iter().enumerate() {
            mult[a][b] = element_index(&doc.elements, name, label)?;
        }
    }
    let unit = (0..order)
        .find(|&u| (0..order).all(|a| mult[u][a] == a && mult[a][u] == a))
        .ok_or_else(|| invalid(label, "mult", "no two-sided unit in the table"))?;
    GroupTable::new(doc.elements.clone(), unit, mult)
        .map_err(|e| invalid(label, "mult", e.to_string()))
}

fn group_from_doc(doc: &GroupDoc, label: &str) -> Result<Arc<SimplicialGroup>, IoError> {
    match (&doc.constant, &doc.levels) {
        (Some(level), None) => {
            if doc.faces.is_some() || doc.degeneracies.is_some() {
                return Err(invalid(label, "constant", "constant groups take no operator tables"));
            }
            let table = table_from_doc(level, label)?;
            Ok(Arc::new(SimplicialGroup::constant(table, doc.truncation)))
        }
        (None, Some(levels)) => {
            let trunc = doc.truncation;
            if levels.len() != trunc + 1 {
                return Err(invalid(label, "levels", format!("expected {} level tables", trunc + 1)));
            }
            let tables: Vec<GroupTable> =
                levels.iter().map(|l| table_from_doc(l, label)).collect::<Result<_, _>>()?;
            let face_doc = doc.faces.as_deref().unwrap_or(&[]);
            let degen_doc = doc.degeneracies.as_deref().unwrap_or(&[]);
            if face_doc.len() != trunc || degen_doc.len() != trunc {
                return Err(invalid(
                    label,
                    "faces",
                    format!("expected {trunc} face blocks and {trunc} degeneracy blocks"),
                ));
            }
            let resolve_block =
                |block: &[Vec<String>], from: usize, to: usize, count: usize, what: &str| {
                    if block.len() != count {
                        return Err(invalid(label, what, format!("expected {count} operators")));
                    }
                    block
                        .iter()
                        .map(|op| {
                            if op.len() != levels[from].elements.len() {
                                return Err(invalid(label, what, "operator covers the wrong level"));
                            }
                            op.iter()
                                .map(|n| element_index(&levels[to].elements, n, label))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()
                };
            let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
            for n in 1..=trunc {
                faces.push(resolve_block(&face_doc[n - 1], n, n - 1, n + 1, "faces")?);
            }
            let mut degens: Vec<Vec<Vec<usize>>> = Vec::new();
            for n in 0..trunc {
                degens.push(resolve_block(&degen_doc[n], n, n + 1, n + 1, "degeneracies")?);
            }
            degens.push(Vec::new());
            let group = SimplicialGroup::new(tables, faces, degens)
                .map_err(|e| invalid(label, "levels", e.to_string()))?;
            Ok(Arc::new(group))
        }
        _ => Err(invalid(label, "levels", "give exactly one of constant or levels")),
    }
}

pub fn load_group(path: &Path, reg: &mut FileRegistry) -> Result<Arc<SimplicialGroup>, IoError> {
    let doc: GroupDoc = parse_doc(path, reg)?;
    group_from_doc(&doc, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// Bundles: base, group, twisting, action, perturbation

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistingDoc {
    values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    #[serde(default)]
    swap: bool,
    #[serde(default)]
    trivial: Option<SourceDoc<DiagramDoc>>,
    #[serde(default)]
    space: Option<SourceDoc<DiagramDoc>>,
    #[serde(default)]
    tables: Option<BTreeMap<String, Vec<BTreeMap<String, BTreeMap<String, String>>>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleDoc {
    #[serde(default)]
    category: Option<SourceDoc<CategoryDoc>>,
    #[serde(default)]
    base: Option<SourceDoc<PresentationDoc>>,
    #[serde(default)]
    group: Option<SourceDoc<GroupDoc>>,
    #[serde(default)]
    twisting: Option<SourceDoc<TwistingDoc>>,
    #[serde(default)]
    action: Option<SourceDoc<ActionDoc>>,
    #[serde(default)]
    perturbation: BTreeMap<String, String>,
}

/// An action as declared in a bundle file. The swap shorthand is built on
/// demand at the truncation a command asks for; the others carry their
/// truncation in the space.
pub enum ActionInput {
    Swap,
    Trivial(Arc<Diagram>),
    Explicit(GroupAction),
}

/// Twisting values as declared in the file, resolved to generator and
/// element indices but not yet checked against the twisting identities.
/// Checking is deferred so a caller can treat a failed identity as a
/// verdict about the input rather than a malformed file.
pub struct TwistingValues {
    base: Arc<Presentation>,
    group: Arc<SimplicialGroup>,
    pub assign: BTreeMap<GenId, usize>,
}

impl TwistingValues {
    /// Runs the identity check and assembles the full twisting function.
    pub fn build(&self) -> Result<TwistingFunction, BundleError> {
        TwistingFunction::from_nondegenerate(self.base.clone(), self.group.clone(), &self.assign)
    }
}

/// Everything a bundle file declares, cross-resolved.
pub struct BundleInput {
    label: String,
    pub category: Arc<FiniteCategory>,
    pub base: Option<Arc<Presentation>>,
    pub group: Option<Arc<SimplicialGroup>>,
    pub twisting: Option<TwistingValues>,
    pub action: Option<ActionInput>,
    /// Chart perturbation: base simplex to acting group element at its level.
    pub perturbation: BTreeMap<SimplexRef, usize>,
}

impl BundleInput {
    pub fn need_base(&self) -> Result<&Arc<Presentation>, IoError> {
        self.base.as_ref().ok_or_else(|| invalid(&self.label, "base", "missing field"))
    }

    pub fn need_group(&self) -> Result<&Arc<SimplicialGroup>, IoError> {
        self.group.as_ref().ok_or_else(|| invalid(&self.label, "group", "missing field"))
    }

    /// The declared twisting values, identity check still pending.
    pub fn raw_twisting(&self) -> Result<&TwistingValues, IoError> {
        self.twisting.as_ref().ok_or_else(|| invalid(&self.label, "twisting", "missing field"))
    }

    /// The declared twisting, checked. A failed identity is reported as an
    /// invalid input here; use [`BundleInput::raw_twisting`] to keep the
    /// failure as a verdict instead.
    pub fn need_twisting(&self) -> Result<TwistingFunction, IoError> {
        let values = self.raw_twisting()?;
        values.build().map_err(|e| invalid(&self.label, "twisting", e.to_string()))
    }

    /// The concrete group and action at truncation `d`. The swap shorthand
    /// is built here; explicit actions must already live at `d`.
    pub fn action_at(&self, d: usize) -> Result<(Arc<SimplicialGroup>, GroupAction), IoError> {
        let spec =
            self.action.as_ref().ok_or_else(|| invalid(&self.label, "action", "missing field"))?;
        match spec {
            ActionInput::Swap => {
                let (built, action) = two_point_swap(self.category.clone(), d)
                    .map_err(|e| invalid(&self.label, "action", e.to_string()))?;
                match &self.group {
                    None => Ok((built, action)),
                    Some(g) => {
                        if !g.same_tables_upto(&built, d) {
                            return Err(invalid(
                                &self.label,
                                "action",
                                "declared group does not match the swap action's group",
                            ));
                        }
                        Ok((g.clone(), action))
                    }
                }
            }
            ActionInput::Trivial(space) => {
                let group = self.need_group()?;
                if space.truncation() != d {
                    return Err(invalid(
                        &self.label,
                        "action",
                        format!("action space lives at truncation {}, need {d}", space.truncation()),
                    ));
                }
                let action = GroupAction::trivial(group.clone(), space.clone())
                    .map_err(|e| invalid(&self.label, "action", e.to_string()))?;
                Ok((group.clone(), action))
            }
            ActionInput::Explicit(action) => {
                let group = self.need_group()?;
                if action.space.truncation() != d {
                    return Err(invalid(
                        &self.label,
                        "action",
                        format!(
                            "action space lives at truncation {}, need {d}",
                            action.space.truncation()
                        ),
                    ));
                }
                Ok((group.clone(), action.clone()))
            }
        }
    }
}

fn action_from_doc(
    doc: &ActionDoc,
    category: &Arc<FiniteCategory>,
    group: Option<&Arc<SimplicialGroup>>,
    dir: &Path,
    label: &str,
    reg: &mut FileRegistry,
) -> Result<ActionInput, IoError> {
    let forms =
        usize::from(doc.swap) + usize::from(doc.trivial.is_some()) + usize::from(doc.space.is_some());
    if forms != 1 || (doc.space.is_some() != doc.tables.is_some()) {
        return Err(invalid(
            label,
            "action",
            "give exactly one of swap, trivial, or space with tables",
        ));
    }
    if doc.swap {
        return Ok(ActionInput::Swap);
    }
    if let Some(src) = &doc.trivial {
        let space = with_source(src, dir, label, reg, diagram_from_doc)?;
        if space.cat != *category {
            return Err(invalid(label, "trivial", "action space over a different category"));
        }
        return Ok(ActionInput::Trivial(space));
    }
    let space = with_source(doc.space.as_ref().unwrap(), dir, label, reg, diagram_from_doc)?;
    if space.cat != *category {
        return Err(invalid(label, "space", "action space over a different category"));
    }
    let group =
        group.ok_or_else(|| invalid(label, "tables", "explicit action tables need a group"))?;
    let table_doc = doc.tables.as_ref().unwrap();
    let trunc = space.truncation();
    let mut tables = Vec::with_capacity(category.object_count());
    for c in 0..category.object_count() {
        let name = category.object_name(c);
        let per_level = table_doc
            .get(name)
            .ok_or_else(|| invalid(label, name, "object has no action tables"))?;
        if per_level.len() != trunc + 1 {
            return Err(invalid(label, name, format!("expected {} level tables", trunc + 1)));
        }
        let p = space.value(c);
        let mut blocks = Vec::with_capacity(trunc + 1);
        for (n, level) in per_level.iter().enumerate() {
            let simplices = p.simplices(n);
            let index: BTreeMap<SimplexRef, usize> =
                simplices.iter().cloned().zip(0..).collect();
            let order = group.order(n);
            let mut block = Vec::with_capacity(order);
            for g in 0..order {
                let gname = group.level(n).name(g);
                match level.get(gname) {
                    None if g == group.unit(n) => block.push((0..simplices.len()).collect()),
                    None => {
                        return Err(invalid(
                            label,
                            gname,
                            format!("no table for the element at level {n}"),
                        ))
                    }
                    Some(map) => {
                        if map.len() != simplices.len() {
                            return Err(invalid(
                                label,
                                gname,
                                format!("table at level {n} must cover every simplex"),
                            ));
                        }
                        let mut row = vec![0usize; simplices.len()];
                        for (from, to) in map {
                            let fr = parse_ref_in(p, from, label)?;
                            let tr = parse_ref_in(p, to, label)?;
                            let pos = *index
                                .get(&fr)
                                .ok_or_else(|| invalid(label, from.clone(), "wrong dimension"))?;
                            row[pos] = *index
                                .get(&tr)
                                .ok_or_else(|| invalid(label, to.clone(), "wrong dimension"))?;
                        }
                        block.push(row);
                    }
                }
            }
            blocks.push(block);
        }
        tables.push(blocks);
    }
    for name in table_doc.keys() {
        if category.object_by_name(name).is_none() {
            return Err(invalid(label, name.clone(), "tables for an unknown object"));
        }
    }
    let action = GroupAction::new(group.clone(), space, tables)
        .map_err(|e| invalid(label, "tables", e.to_string()))?;
    Ok(ActionInput::Explicit(action))
}

pub fn load_bundle(path: &Path, reg: &mut FileRegistry) -> Result<BundleInput, IoError> {
    let doc: BundleDoc = parse_doc(path, reg)?;
    let (dir, label) = dir_and_label(path);
    let category = match &doc.category {
        None => Arc::new(FiniteCategory::terminal()),
        Some(src) => with_source(src, &dir, &label, reg, |d, _, l, _| category_from_doc(d, l))?,
    };
    let base = match &doc.base {
        None => None,
        Some(src) => {
            Some(with_source(src, &dir, &label, reg, |d, _, l, _| presentation_from_doc(d, l))?)
        }
    };
    let group = match &doc.group {
        None => None,
        Some(src) => Some(with_source(src, &dir, &label, reg, |d, _, l, _| group_from_doc(d, l))?),
    };
    let twisting = match &doc.twisting {
        None => None,
        Some(src) => {
            let (base, group) = match (&base, &group) {
                (Some(b), Some(g)) => (b.clone(), g.clone()),
                _ => return Err(invalid(&label, "twisting", "twisting needs base and group")),
            };
            let values = with_source(src, &dir, &label, reg, |d: &TwistingDoc, _, _, _| {
                Ok(d.values.clone())
            })?;
            let mut assign = BTreeMap::new();
            for n in 1..=base.truncation() {
                for g in base.generators(n) {
                    assign.insert(g, group.unit(n - 1));
                }
            }
            for (name, elem) in &values {
                let gen = base
                    .generator_by_name(name)
                    .ok_or_else(|| invalid(&label, name.clone(), "unknown base generator"))?;
                if gen.dim == 0 {
                    return Err(invalid(&label, name.clone(), "twisting values start at dim 1"));
                }
                let table = group.level(gen.dim - 1);
                let e = (0..table.order())
                    .find(|&e| table.name(e) == elem)
                    .ok_or_else(|| invalid(&label, elem.clone(), "unknown group element"))?;
                assign.insert(gen, e);
            }
            Some(TwistingValues { base, group, assign })
        }
    };
    let action = match &doc.action {
        None => None,
        Some(src) => Some(with_source(src, &dir, &label, reg, |d, sub_dir, sub_label, reg| {
            action_from_doc(d, &category, group.as_ref(), sub_dir, sub_label, reg)
        })?),
    };
    let mut perturbation = BTreeMap::new();
    if !doc.perturbation.is_empty() {
        let (base, group) = match (&base, &group) {
            (Some(b), Some(g)) => (b, g),
            _ => return Err(invalid(&label, "perturbation", "perturbation needs base and group")),
        };
        for (sref, elem) in &doc.perturbation {
            let r = parse_ref_in(base, sref, &label)?;
            let table = group.level(r.dim());
            let e = (0..table.order())
                .find(|&e| table.name(e) == elem)
                .ok_or_else(|| invalid(&label, elem.clone(), "unknown group element"))?;
            perturbation.insert(r, e);
        }
    }
    Ok(BundleInput { label, category, base, group, twisting, action, perturbation })
}

/// The twisting values on non-degenerate generators, in the input format.
pub fn twisting_doc(t: &TwistingFunction) -> Value {
    let mut values = serde_json::Map::new();
    for (gen, e) in t.nondegenerate_values() {
        values.insert(
            t.base.generator_name(gen).to_string(),
            json!(t.group.level(gen.dim - 1).name(e)),
        );
    }
    json!({ "values": values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_tcp;
    use crate::simplicial::circle;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn scratch_dir() -> PathBuf {
        static NEXT: AtomicUsize = AtomicUsize::new(0);
        let id = NEXT.fetch_add(1, Ordering::Relaxed);
        let dir = std::env::temp_dir().join(format!("difib-io-{}-{id}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn write(dir: &Path, name: &str, content: &Value) -> PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(content).unwrap()).unwrap();
        path
    }

    #[test]
    fn circle_presentation_loads_and_round_trips() {
        let dir = scratch_dir();
        let doc = json!({
            "truncation": 2,
            "generators": [["v"], ["e"]],
            "faces": {"e": ["v", "v"]}
        });
        let path = write(&dir, "circle.json", &doc);
        let mut reg = FileRegistry::new();
        let p = load_presentation(&path, &mut reg).unwrap();
        assert_eq!(*p, circle(2));
        assert_eq!(reg.hashes.len(), 1);

        let back = presentation_doc(&p);
        let path2 = write(&dir, "again.json", &back);
        let p2 = load_presentation(&path2, &mut reg).unwrap();
        assert_eq!(*p2, *p);
    }

    #[test]
    fn increasing_degeneracy_words_are_rejected() {
        let dir = scratch_dir();
        let doc = json!({
            "truncation": 2,
            "generators": [["v"], ["e"], ["f"]],
            "faces": {"e": ["v", "v"], "f": ["s0 v", "e", "e"]}
        });
        let good = write(&dir, "good.json", &doc);
        load_presentation(&good, &mut FileRegistry::new()).unwrap();

        let bad = json!({
            "truncation": 2,
            "generators": [["v"], ["e"], ["f"]],
            "faces": {"e": ["v", "v"], "f": ["s0 s1 v", "s1 s0 v", "s1 s0 v"]}
        });
        let path = write(&dir, "bad.json", &bad);
        let err = load_presentation(&path, &mut FileRegistry::new()).unwrap_err();
        let IoError::Invalid { token, why, .. } = err else { panic!("wrong error kind") };
        assert_eq!(token, "s0 s1 v");
        assert!(why.contains("strictly decrease"));
    }

    #[test]
    fn arrow_category_loads_and_requires_identities() {
        let dir = scratch_dir();
        let doc = json!({
            "objects": ["a", "b"],
            "morphisms": [
                {"name": "id_a", "src": "a", "dst": "a"},
                {"name": "id_b", "src": "b", "dst": "b"},
                {"name": "f", "src": "a", "dst": "b"}
            ]
        });
        let path = write(&dir, "arrow.json", &doc);
        let cat = load_category(&path, &mut FileRegistry::new()).unwrap();
        assert_eq!(*cat, FiniteCategory::arrow());

        let missing = json!({
            "objects": ["a", "b"],
            "morphisms": [
                {"name": "id_a", "src": "a", "dst": "a"},
                {"name": "f", "src": "a", "dst": "b"}
            ]
        });
        let path = write(&dir, "missing.json", &missing);
        let err = load_category(&path, &mut FileRegistry::new()).unwrap_err();
        assert!(err.to_string().contains("id_b"));
    }

    #[test]
    fn z2_category_round_trips_through_its_doc() {
        let dir = scratch_dir();
        let doc = category_doc(&FiniteCategory::z2());
        let path = write(&dir, "z2.json", &doc);
        let cat = load_category(&path, &mut FileRegistry::new()).unwrap();
        assert_eq!(*cat, FiniteCategory::z2());
    }

    #[test]
    fn diagram_with_file_references_loads_and_hashes_all_parts() {
        let dir = scratch_dir();
        write(
            &dir,
            "cat.json",
            &json!({
                "objects": ["a", "b"],
                "morphisms": [
                    {"name": "id_a", "src": "a", "dst": "a"},
                    {"name": "id_b", "src": "b", "dst": "b"},
                    {"name": "f", "src": "a", "dst": "b"}
                ]
            }),
        );
        write(&dir, "pt.json", &json!({"truncation": 1, "generators": [["x"]]}));
        let doc = json!({
            "category": "cat.json",
            "objects": {
                "a": "pt.json",
                "b": {"truncation": 1, "generators": [["0", "1"], ["01"]],
                       "faces": {"01": ["1", "0"]}}
            },
            "morphisms": {"f": [["0"]]}
        });
        let path = write(&dir, "diagram.json", &doc);
        let mut reg = FileRegistry::new();
        let d = load_diagram(&path, &mut reg).unwrap();
        assert_eq!(d.cat.object_count(), 2);
        assert_eq!(d.value(1).generator_count(1), 1);
        assert_eq!(reg.hashes.len(), 3);

        let back = diagram_doc(&d);
        let path2 = write(&dir, "inline.json", &back);
        let d2 = load_diagram(&path2, &mut FileRegistry::new()).unwrap();
        assert_eq!(*d2.value(0), *d.value(0));
        assert_eq!(d2.action(2).assignment(), d.action(2).assignment());
    }

    #[test]
    fn diagram_map_loads_and_validates() {
        let circle_doc = json!({
            "truncation": 2,
            "generators": [["v"], ["e"]],
            "faces": {"e": ["v", "v"]}
        });
        let cat_doc = json!({
            "objects": ["pt"],
            "morphisms": [{"name": "id_pt", "src": "pt", "dst": "pt"}]
        });
        let diagram = json!({"category": cat_doc, "objects": {"pt": circle_doc}});
        let dir = scratch_dir();
        let path = write(
            &dir,
            "map.json",
            &json!({
                "source": diagram,
                "target": diagram,
                "components": {"pt": [["v"], ["e"]]}
            }),
        );
        let m = load_diagram_map(&path, &mut FileRegistry::new()).unwrap();
        assert!(m.same_assignment(&DiagramMap::identity(m.source.clone())));

        let broken = write(
            &dir,
            "broken.json",
            &json!({
                "source": diagram,
                "target": diagram,
                "components": {"pt": [["v"], ["s0 v"]]}
            }),
        );
        // s0 v has the right dimension but collapses the edge's faces fine,
        // so this one actually validates; a wrong-dimension image must not.
        load_diagram_map(&broken, &mut FileRegistry::new()).unwrap();
        let bad = write(
            &dir,
            "bad.json",
            &json!({
                "source": diagram,
                "target": diagram,
                "components": {"pt": [["e"], ["e"]]}
            }),
        );
        let err = load_diagram_map(&bad, &mut FileRegistry::new()).unwrap_err();
        assert!(matches!(err, IoError::Invalid { .. }));
    }

    #[test]
    fn constant_and_levelwise_group_files_agree() {
        let dir = scratch_dir();
        let constant = write(
            &dir,
            "constant.json",
            &json!({
                "truncation": 1,
                "constant": {"elements": ["e", "g"], "mult": [["e", "g"], ["g", "e"]]}
            }),
        );
        let g1 = load_group(&constant, &mut FileRegistry::new()).unwrap();

        let level = json!({"elements": ["e", "g"], "mult": [["e", "g"], ["g", "e"]]});
        let full = write(
            &dir,
            "full.json",
            &json!({
                "truncation": 1,
                "levels": [level, level],
                "faces": [[["e", "g"], ["e", "g"]]],
                "degeneracies": [[["e", "g"]]]
            }),
        );
        let g2 = load_group(&full, &mut FileRegistry::new()).unwrap();
        assert!(g1.same_tables_upto(&g2, 1));
        assert_eq!(g1.unit(0), 0);
    }

    #[test]
    fn group_without_a_unit_is_rejected() {
        let dir = scratch_dir();
        let path = write(
            &dir,
            "nounit.json",
            &json!({
                "truncation": 0,
                "constant": {"elements": ["a", "b"], "mult": [["b", "b"], ["b", "b"]]}
            }),
        );
        let err = load_group(&path, &mut FileRegistry::new()).unwrap_err();
        assert!(err.to_string().contains("unit"));
    }

    #[test]
    fn bundle_file_resolves_twisting_action_and_perturbation() {
        let dir = scratch_dir();
        let path = write(
            &dir,
            "bundle.json",
            &json!({
                "base": {"truncation": 2, "generators": [["v"], ["e"]],
                          "faces": {"e": ["v", "v"]}},
                "group": {"truncation": 2,
                           "constant": {"elements": ["e", "g"],
                                        "mult": [["e", "g"], ["g", "e"]]}},
                "twisting": {"values": {"e": "g"}},
                "action": {"swap": true},
                "perturbation": {"s0 v": "g"}
            }),
        );
        let mut reg = FileRegistry::new();
        let bundle = load_bundle(&path, &mut reg).unwrap();
        let t = bundle.need_twisting().unwrap();
        let e = bundle.need_base().unwrap().generator_by_name("e").unwrap();
        assert_eq!(t.value(&SimplexRef::generator(e)), 1);
        assert_eq!(bundle.perturbation.len(), 1);

        let (group, action) = bundle.action_at(2).unwrap();
        let t = t.with_group(group).unwrap();
        let tcp = build_tcp(&t, &action).unwrap();
        assert_eq!(tcp.total.value(0).generator_count(0), 2);
    }

    #[test]
    fn twisting_defaults_to_units_and_doc_round_trips() {
        let dir = scratch_dir();
        let path = write(
            &dir,
            "bundle.json",
            &json!({
                "base": {"truncation": 2, "generators": [["v"], ["e"]],
                          "faces": {"e": ["v", "v"]}},
                "group": {"truncation": 1,
                           "constant": {"elements": ["e", "g"],
                                        "mult": [["e", "g"], ["g", "e"]]}},
                "twisting": {"values": {}}
            }),
        );
        let bundle = load_bundle(&path, &mut FileRegistry::new()).unwrap();
        let t = bundle.need_twisting().unwrap();
        let doc = twisting_doc(&t);
        assert_eq!(doc["values"]["e"], "e");
    }

    #[test]
    fn explicit_action_tables_build_a_validated_action() {
        let dir = scratch_dir();
        let two_points = json!({
            "category": {"objects": ["pt"],
                          "morphisms": [{"name": "id_pt", "src": "pt", "dst": "pt"}]},
            "objects": {"pt": {"truncation": 1, "generators": [["x0", "x1"]]}}
        });
        let path = write(
            &dir,
            "bundle.json",
            &json!({
                "group": {"truncation": 1,
                           "constant": {"elements": ["e", "g"],
                                        "mult": [["e", "g"], ["g", "e"]]}},
                "action": {
                    "space": two_points,
                    "tables": {"pt": [
                        {"g": {"x0": "x1", "x1": "x0"}},
                        {"g": {"s0 x0": "s0 x1", "s0 x1": "s0 x0"}}
                    ]}
                }
            }),
        );
        let bundle = load_bundle(&path, &mut FileRegistry::new()).unwrap();
        let (group, action) = bundle.action_at(1).unwrap();
        let x0 = action.space.value(0).generator_by_name("x0").unwrap();
        let moved = action.apply(0, 0, 1, &SimplexRef::generator(x0));
        assert_eq!(action.space.value(0).display_ref(&moved), "x1");
        assert_eq!(group.order(0), 2);
    }

    #[test]
    fn unknown_fields_are_parse_errors_naming_the_file() {
        let dir = scratch_dir();
        let path = write(
            &dir,
            "typo.json",
            &json!({"truncation": 1, "generators": [["v"]], "face": {}}),
        );
        let err = load_presentation(&path, &mut FileRegistry::new()).unwrap_err();
        let IoError::Parse { path: p, why } = err else { panic!("wrong error kind") };
        assert!(p.contains("typo.json"));
        assert!(why.contains("face"));
    }
}
