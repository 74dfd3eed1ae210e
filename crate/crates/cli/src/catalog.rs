use calogero_core::lie::{MAX_COPIES, MAX_RANK_N};
use calogero_core::{AlgebraDescriptor, FamilyName};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    /// Name accepted by `--algebra`.
    pub name: String,
    pub label: String,
    pub descriptor: AlgebraDescriptor,
    pub dim: usize,
    pub rank: usize,
    pub weyl_order: usize,
    pub automorphism: String,
    pub rmatrix_kinds: [&'static str; 2],
}

fn entry(desc: AlgebraDescriptor) -> CatalogEntry {
    let name = match desc.family {
        FamilyName::Sl => format!("sl{}", desc.n),
        FamilyName::Su => format!("su{}", desc.n),
        FamilyName::SlProduct => format!("sl{}x{}", desc.n, desc.copies),
    };
    CatalogEntry {
        name,
        label: desc.label(),
        descriptor: desc,
        dim: desc.dim(),
        rank: desc.rank(),
        weyl_order: desc.weyl_order(),
        automorphism: desc.automorphism.to_string(),
        rmatrix_kinds: ["abelian", "nonabelian"],
    }
}

pub fn cmd_catalog() -> Vec<CatalogEntry> {
    let simple = 2..=MAX_RANK_N;
    let mut out: Vec<CatalogEntry> = simple
        .clone()
        .map(|n| entry(AlgebraDescriptor::sl(n)))
        .collect();
    out.extend(simple.clone().map(|n| entry(AlgebraDescriptor::su(n))));
    for m in simple {
        out.extend((2..=MAX_COPIES).map(|c| entry(AlgebraDescriptor::sl_product(m, c))));
    }
    out
}

pub fn catalog_text(entries: &[CatalogEntry]) -> String {
    let mut s = format!(
        "{:<8} {:<10} {:>5} {:>5} {:>7}  {:<10} {}\n",
        "name", "algebra", "dim", "rank", "|W|", "theta", "r-matrices"
    );
    for e in entries {
        s += &format!(
            "{:<8} {:<10} {:>5} {:>5} {:>7}  {:<10} {}\n",
            e.name,
            e.label,
            e.dim,
            e.rank,
            e.weyl_order,
            e.automorphism,
            e.rmatrix_kinds.join(", ")
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_covers_the_families() {
        let c = cmd_catalog();
        assert_eq!(c.len(), 7 + 7 + 7 * 3);
        let sl3 = c.iter().find(|e| e.name == "sl3").unwrap();
        assert_eq!((sl3.dim, sl3.rank, sl3.weyl_order), (8, 2, 6));
        let prod = c.iter().find(|e| e.name == "sl2x3").unwrap();
        assert_eq!(
            (prod.dim, prod.weyl_order, prod.automorphism.as_str()),
            (9, 2, "cyclic")
        );
        for e in &c {
            assert_eq!(e.name.parse::<AlgebraDescriptor>().unwrap(), e.descriptor);
        }
    }
}
