//! Versioned data store of known series and singular-value constants.
//!
//! Entries are parsed from a human-readable `key = value` format into exact
//! surd expressions and re-evaluated at whatever precision a caller needs.
//! The built-in dataset ships embedded in the binary; derived entries are
//! written to separate output files, never merged into the shipped data.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use rug::Rational;

use crate::error::{Error, Result};
use crate::real::BigReal;
use crate::surd::SurdExpr;

/// Embedded default dataset.
const BUILTIN_TEXT: &str = include_str!("../data/catalog.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Series,
    Constant,
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryKind::Series => write!(f, "series"),
            EntryKind::Constant => write!(f, "constant"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Proved,
    Conjectured,
    DerivedHere,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Proved => write!(f, "proved"),
            Status::Conjectured => write!(f, "conjectured"),
            Status::DerivedHere => write!(f, "derived-here"),
        }
    }
}

/// A known series or constant with provenance.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: EntryKind,
    pub level: Option<u32>,
    pub s: Option<u32>,
    pub z: Option<SurdExpr>,
    pub a: Option<SurdExpr>,
    pub b: Option<SurdExpr>,
    pub normalization: Option<SurdExpr>,
    pub value: Option<SurdExpr>,
    pub r_value: Option<Rational>,
    pub status: Status,
    pub citation: String,
}

impl CatalogEntry {
    /// Series entry whose parameter values are not recorded (r only).
    pub fn is_placeholder(&self) -> bool {
        self.kind == EntryKind::Series && self.z.is_none()
    }
}

/// An immutable, validated collection of entries.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The embedded dataset (parsed once).
    pub fn builtin() -> &'static Catalog {
        static BUILTIN: OnceLock<Catalog> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Catalog::parse_str(BUILTIN_TEXT).expect("embedded catalog must be valid")
        })
    }

    pub fn load_path(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)?;
        Catalog::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Catalog> {
        let mut entries = Vec::new();
        let mut fields: BTreeMap<String, (String, usize)> = BTreeMap::new();
        let mut block_start = 1usize;
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "---" {
                if !fields.is_empty() {
                    entries.push(Self::build_entry(&fields, block_start)?);
                    fields.clear();
                }
                block_start = lineno + 1;
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: lineno,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_string();
            if fields.contains_key(&key) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            fields.insert(key, (value.trim().to_string(), lineno));
        }
        if !fields.is_empty() {
            entries.push(Self::build_entry(&fields, block_start)?);
        }
        let catalog = Catalog { entries };
        catalog.validate()?;
        Ok(catalog)
    }

    fn build_entry(
        fields: &BTreeMap<String, (String, usize)>,
        block_line: usize,
    ) -> Result<CatalogEntry> {
        let get = |k: &str| fields.get(k).map(|(v, _)| v.as_str());
        let id = get("id")
            .ok_or(Error::Parse {
                line: block_line,
                msg: "missing `id`".into(),
            })?
            .to_string();
        let kind = match get("kind") {
            Some("series") => EntryKind::Series,
            Some("constant") => EntryKind::Constant,
            other => {
                return Err(Error::InvalidEntry {
                    id,
                    msg: format!("bad kind {other:?}"),
                })
            }
        };
        let status = match get("status") {
            Some("proved") => Status::Proved,
            Some("conjectured") => Status::Conjectured,
            Some("derived-here") => Status::DerivedHere,
            other => {
                return Err(Error::InvalidEntry {
                    id,
                    msg: format!("bad status {other:?}"),
                })
            }
        };
        let parse_u32 = |k: &str| -> Result<Option<u32>> {
            match fields.get(k) {
                None => Ok(None),
                Some((v, line)) => v.parse::<u32>().map(Some).map_err(|e| Error::Parse {
                    line: *line,
                    msg: format!("bad integer for `{k}`: {e}"),
                }),
            }
        };
        let parse_surd = |k: &str| -> Result<Option<SurdExpr>> {
            match fields.get(k) {
                None => Ok(None),
                Some((v, line)) => SurdExpr::parse(v).map(Some).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { line: *line, msg },
                    other => other,
                }),
            }
        };
        let r_value = match fields.get("r") {
            None => None,
            Some((v, line)) => Some(parse_rational(v).map_err(|msg| Error::Parse {
                line: *line,
                msg,
            })?),
        };
        Ok(CatalogEntry {
            id,
            kind,
            level: parse_u32("level")?,
            s: parse_u32("s")?,
            z: parse_surd("z")?,
            a: parse_surd("a")?,
            b: parse_surd("b")?,
            normalization: parse_surd("normalization")?,
            value: parse_surd("value")?,
            r_value,
            status,
            citation: get("citation").unwrap_or("").to_string(),
        })
    }

    /// Structural invariants: unique ids, well-formed kinds, |z| < 1, and
    /// (for level-3 series carrying r) the recorded r consistent with the
    /// series' own z and b.
    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for e in &self.entries {
            if !seen.insert(e.id.clone()) {
                return Err(Error::InvalidEntry {
                    id: e.id.clone(),
                    msg: "duplicate id".into(),
                });
            }
            let invalid = |msg: String| Error::InvalidEntry {
                id: e.id.clone(),
                msg,
            };
            match e.kind {
                EntryKind::Constant => {
                    if e.value.is_none() {
                        return Err(invalid("constant entry without `value`".into()));
                    }
                }
                EntryKind::Series => {
                    let s = e.s.ok_or_else(|| invalid("series entry without `s`".into()))?;
                    if ![2, 4, 3, 6].contains(&s) {
                        return Err(invalid(format!("s = {s} not in {{2, 3, 4, 6}}")));
                    }
                    let have =
                        [&e.z, &e.a, &e.b, &e.normalization].iter().filter(|v| v.is_some()).count();
                    if have != 0 && have != 4 {
                        return Err(invalid(
                            "series must carry all of z, a, b, normalization or none".into(),
                        ));
                    }
                    if let Some(z) = &e.z {
                        let zv = z.eval(192).map_err(|err| invalid(format!("z: {err}")))?;
                        if zv.abs() >= BigReal::one(192) {
                            return Err(invalid(format!("|z| = {} >= 1", zv.abs().to_decimal(8))));
                        }
                        // Cheap inverse-pipeline consistency: for level-3
                        // series the recorded r must match (3 c b / (1-2y))^2
                        // with y = (1 - sqrt(1-z))/2.
                        if s == 3 {
                            if let Some(r) = &e.r_value {
                                let prec = 256;
                                let zv = z.eval(prec).map_err(|err| invalid(err.to_string()))?;
                                let bv = e.b.as_ref().unwrap().eval(prec).map_err(|err| invalid(err.to_string()))?;
                                let cv = e
                                    .normalization
                                    .as_ref()
                                    .unwrap()
                                    .eval(prec)
                                    .map_err(|err| invalid(err.to_string()))?;
                                let one = BigReal::one(prec);
                                let y = (&one - &(&one - &zv).sqrt().map_err(|err| invalid(err.to_string()))?)
                                    .div_u64(2)?;
                                let denom = &one - &y.mul_u64(2);
                                let implied = (&(&bv * &cv).mul_u64(3) / &denom).square();
                                let recorded = BigReal::from_rational(r, prec);
                                if !implied.agrees_within_pow2(&recorded, -96) {
                                    return Err(invalid(format!(
                                        "recorded r = {} but series implies r = {}",
                                        recorded.to_decimal(10),
                                        implied.to_decimal(10)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn series(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Series)
    }

    pub fn constants(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Constant)
    }

    /// Fetch a constant's exact expression by id.
    pub fn constant(&self, id: &str) -> Result<&SurdExpr> {
        self.get(id)
            .filter(|e| e.kind == EntryKind::Constant)
            .and_then(|e| e.value.as_ref())
            .ok_or_else(|| Error::NotAvailable(format!("no tabulated constant `{id}`")))
    }

    /// Render an entry back into catalog text.
    pub fn render_entry(e: &CatalogEntry) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("id", e.id.clone());
        push("kind", e.kind.to_string());
        if let Some(l) = e.level {
            push("level", l.to_string());
        }
        if let Some(s) = e.s {
            push("s", s.to_string());
        }
        if let Some(z) = &e.z {
            push("z", z.to_string());
        }
        if let Some(a) = &e.a {
            push("a", a.to_string());
        }
        if let Some(b) = &e.b {
            push("b", b.to_string());
        }
        if let Some(n) = &e.normalization {
            push("normalization", n.to_string());
        }
        if let Some(v) = &e.value {
            push("value", v.to_string());
        }
        if let Some(r) = &e.r_value {
            push("r", r.to_string());
        }
        push("status", e.status.to_string());
        if !e.citation.is_empty() {
            push("citation", e.citation.clone());
        }
        out
    }

    /// Append derived entries to a separate output file (creating it if
    /// needed). The shipped dataset is never modified.
    pub fn append_derived(path: &Path, entries: &[CatalogEntry]) -> Result<()> {
        use std::io::Write;
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        for e in entries {
            if f.metadata()?.len() > 0 {
                writeln!(f, "---")?;
            }
            write!(f, "{}", Self::render_entry(e))?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    s.parse::<Rational>()
        .map_err(|e| format!("bad rational `{s}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_validates() {
        let cat = Catalog::builtin();
        // The seven known level-3 series plus the three quartic s = 2 ones.
        for id in [
            "eq4.1", "eq4.2", "eq4.3", "eq4.4", "eq4.5", "eq4.6", "eq4.7",
            "baruah-berndt-1", "baruah-berndt-2", "baruah-berndt-3",
        ] {
            let e = cat.get(id).unwrap_or_else(|| panic!("missing {id}"));
            assert!(!e.is_placeholder(), "{id} must carry expressions");
        }
    }

    #[test]
    fn n_to_r_map_is_complete() {
        let cat = Catalog::builtin();
        for (n, r) in [(11u32, 33u32), (13, 39), (19, 57), (31, 93), (33, 99), (59, 177)] {
            let id = format!("n{n}-aldawoud");
            let e = cat.get(&id).unwrap_or_else(|| panic!("missing {id}"));
            assert_eq!(e.r_value.as_ref().unwrap(), &Rational::from(r));
        }
        assert!(cat.get("n13-aldawoud").unwrap().is_placeholder());
        assert!(cat.get("n59-aldawoud").unwrap().is_placeholder());
    }

    #[test]
    fn constants_present() {
        let cat = Catalog::builtin();
        for id in [
            "rho-11", "lambda-star-11", "alpha-11", "lambda-star-30", "alpha-30",
            "g57-pow-minus6", "sigma-57", "g93-pow-minus6", "sigma-93",
        ] {
            cat.constant(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        assert!(cat.constant("sigma-101").is_err());
    }

    #[test]
    fn parse_error_reports_line() {
        let bad = "id = x\nkind = series\ns = 3\nstatus = proved\nz = sqrt(";
        match Catalog::parse_str(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn invariant_z_below_one() {
        let bad = "id = x\nkind = series\nlevel = 3\ns = 3\nz = 3/2\na = 1\nb = 1\nnormalization = 1\nstatus = proved";
        match Catalog::parse_str(bad) {
            Err(Error::InvalidEntry { id, msg }) => {
                assert_eq!(id, "x");
                assert!(msg.contains(">= 1"), "{msg}");
            }
            other => panic!("expected invariant violation, got {other:?}"),
        }
    }

    #[test]
    fn invariant_r_consistency() {
        // eq4.1 with a wrong r must be rejected by the cheap inverse check.
        let bad = "id = x\nkind = series\nlevel = 3\ns = 3\nz = -9/16\na = 1\nb = 5\nnormalization = sqrt(3)/4\nr = 28\nstatus = proved";
        match Catalog::parse_str(bad) {
            Err(Error::InvalidEntry { msg, .. }) => assert!(msg.contains("implies r"), "{msg}"),
            other => panic!("expected invariant violation, got {other:?}"),
        }
    }

    #[test]
    fn render_round_trips() {
        let cat = Catalog::builtin();
        let e = cat.get("eq4.1").unwrap();
        let text = Catalog::render_entry(e);
        let re = Catalog::parse_str(&text).unwrap();
        let e2 = re.get("eq4.1").unwrap();
        assert_eq!(e2.kind, EntryKind::Series);
        assert_eq!(e2.r_value, e.r_value);
        let a = e.z.as_ref().unwrap().eval(192).unwrap();
        let b = e2.z.as_ref().unwrap().eval(192).unwrap();
        assert!(a.agrees_within_pow2(&b, -180));
    }
}
