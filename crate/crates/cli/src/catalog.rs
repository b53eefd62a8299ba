use std::fs;
use std::path::Path;

use ekchain::{FiniteGroup, GroupError, GroupFile, Subgroup};

use crate::CliError;

/// A named group file.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub file: GroupFile,
}

const BUILTIN: &[(&str, &str)] = &[
    ("A4", "degree: 4\n(0 1 2)\n(0 1)(2 3)\n"),
    ("D16", "degree: 8\n(0 1 2 3 4 5 6 7)\n(1 7)(2 6)(3 5)\n"),
    ("D8", "degree: 4\n(0 1 2 3)\n(1 3)\n"),
    ("E8", "# elementary abelian of order 8\ndegree: 6\n(0 1)\n(2 3)\n(4 5)\n"),
    ("Q8", "degree: 8\n(0 1 3 6)(2 5 7 4)\n(0 2 3 7)(1 4 6 5)\n"),
    ("S3", "degree: 3\n(0 1)\n(0 1 2)\n"),
    ("S4", "degree: 4\n(0 1)\n(0 1 2 3)\n"),
    ("Z4xZ2", "degree: 6\n(0 1 2 3)\n(4 5)\n"),
];

/// Documented orders of the built-in groups.
pub const BUILTIN_ORDERS: &[(&str, usize)] = &[
    ("A4", 12),
    ("D16", 16),
    ("D8", 8),
    ("E8", 8),
    ("Heis3", 27),
    ("Q8", 8),
    ("S3", 6),
    ("S4", 24),
    ("Z4xZ2", 8),
];

/// Unitriangular 3×3 matrices over Z/3 acting on themselves; the point
/// `9a + 3b + c` stands for the triple `(a, b, c)`.
fn heisenberg_text() -> String {
    let idx = |a: u32, b: u32, c: u32| (a % 3) * 9 + (b % 3) * 3 + c % 3;
    let as_images = |f: &dyn Fn(u32, u32, u32) -> u32| -> Vec<u32> {
        (0..27).map(|p| f(p / 9, p / 3 % 3, p % 3)).collect()
    };
    let x = as_images(&|a, b, c| idx(a + 1, b, c + b));
    let y = as_images(&|a, b, c| idx(a, b + 1, c));
    let mut out = String::from("# Heisenberg group mod 3\ndegree: 27\n");
    for images in [x, y] {
        let p = ekchain::Permutation::from_images(images).expect("bijection on 27 points");
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

pub fn builtin() -> Vec<CatalogEntry> {
    let mut entries: Vec<CatalogEntry> = BUILTIN
        .iter()
        .map(|(name, text)| CatalogEntry {
            name: name.to_string(),
            file: GroupFile::parse(text).expect("built-in group text parses"),
        })
        .collect();
    entries.push(CatalogEntry {
        name: "Heis3".into(),
        file: GroupFile::parse(&heisenberg_text()).expect("built-in group text parses"),
    });
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    entries
}

/// Every `*.grp` file in `dir`, named by file stem, in name order.
pub fn from_dir(dir: &Path) -> Result<Vec<CatalogEntry>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    let mut entries = Vec::new();
    for item in fs::read_dir(dir).map_err(io)? {
        let path = item.map_err(io)?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("grp") {
            continue;
        }
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let file = GroupFile::parse(&text).map_err(|e| CliError::Input {
            path: path.display().to_string(),
            source: e,
        })?;
        entries.push(CatalogEntry { name, file });
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(entries)
}

/// A subgroup together with the generators it was first found from.
#[derive(Debug, Clone)]
pub struct NamedSubgroup {
    pub generators: Vec<ekchain::Permutation>,
    pub subgroup: Subgroup,
}

impl NamedSubgroup {
    pub fn label(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("<{}>", gens.join(", "))
    }
}

/// All subgroups generated by at most two elements, and the whole group on
/// its own generators, each listed once, in order of (order, sorted element
/// ids).
pub fn small_subgroups(g: &FiniteGroup) -> Vec<NamedSubgroup> {
    let n = g.order() as u32;
    let mut found: std::collections::BTreeMap<(usize, Vec<u32>), Vec<u32>> = Default::default();
    let mut add = |gens: Vec<u32>| {
        let s = g.generate(&gens);
        found.entry((s.order(), s.ids().collect())).or_insert(gens);
    };
    add(vec![]);
    for a in 0..n {
        add(vec![a]);
    }
    for a in 0..n {
        for b in a + 1..n {
            add(vec![a, b]);
        }
    }
    add(g.generators().iter().filter_map(|p| g.id_of(p)).collect());
    found
        .into_iter()
        .map(|((_, ids), gens)| NamedSubgroup {
            generators: gens.iter().map(|&i| g.element(i).clone()).collect(),
            subgroup: g.set_of(ids),
        })
        .collect()
}

pub fn close(entry: &CatalogEntry, cap: usize) -> Result<FiniteGroup, GroupError> {
    entry.file.close(cap)
}
