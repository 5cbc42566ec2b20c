use super::ModelError;
use crate::diffalg::{rat, Degree, DiffPoly, Space, MAX_DIM};
use crate::lambda::{check_jacobi, check_skewsymmetry, Alphabet, BracketTable, LambdaPoly};
use crate::par::Execution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketMetadata {
    pub dim: usize,
    pub gens: usize,
    pub degree: Degree,
    pub note: String,
}

/// A bracket table that passed skewsymmetry and Jacobi when built.
#[derive(Clone, Debug)]
pub struct NamedBracket {
    pub name: String,
    pub table: BracketTable,
    pub metadata: BracketMetadata,
}

impl NamedBracket {
    pub fn new(name: &str, table: BracketTable, note: &str) -> Result<Self, ModelError> {
        let invalid = |reason: &str| ModelError::Invalid {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if !check_skewsymmetry(&table).passed() {
            return Err(invalid("not skewsymmetric"));
        }
        if !check_jacobi(&table, Execution::default()).is_empty() {
            return Err(invalid("Jacobi identity fails"));
        }
        let space = table.space();
        Ok(NamedBracket {
            name: name.to_string(),
            metadata: BracketMetadata {
                dim: space.dim(),
                gens: space.gens(),
                degree: table.degree(),
                note: note.to_string(),
            },
            table,
        })
    }
}

/// `{ω_λ ω} = ω₁λ₂ − ω₂λ₁`.
pub fn euler_bracket() -> NamedBracket {
    let s = Space::new(2, 1).unwrap();
    let l = |k| LambdaPoly::var(s, Alphabet::Lambda, k);
    let entry =
        &l(1).mul_diffpoly(&DiffPoly::jet_of(s, 0, &[1, 0])) - &l(0).mul_diffpoly(&DiffPoly::jet_of(s, 0, &[0, 1]));
    let table = BracketTable::scalar(entry).unwrap();
    NamedBracket::new("euler", table, "vorticity bracket, orientation e^{12} = +1").expect("Euler bracket is Poisson")
}

fn unit(dim: usize, k: usize) -> Vec<u32> {
    let mut e = vec![0; dim];
    e[k] = 1;
    e
}

/// The Lie–Poisson bracket of vector fields in `dim` dimensions:
/// `{p_a λ p_b} = p_b λ_a + p_a λ_b + ∂_a p_b`.
pub fn epdiff_bracket(dim: usize) -> Result<NamedBracket, ModelError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(ModelError::Dimension(dim));
    }
    let s = Space::new(dim, dim).map_err(|_| ModelError::Dimension(dim))?;
    let mut entries = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            let pa = DiffPoly::generator(s, a);
            let pb = DiffPoly::generator(s, b);
            let mut e = LambdaPoly::var(s, Alphabet::Lambda, a).mul_diffpoly(&pb);
            e.add_assign(&LambdaPoly::var(s, Alphabet::Lambda, b).mul_diffpoly(&pa));
            e.add_assign(&LambdaPoly::from_diffpoly(DiffPoly::jet_of(s, b, &unit(dim, a))));
            entries.push(e);
        }
    }
    let table = BracketTable::from_entries(s, entries).expect("square table");
    NamedBracket::new(
        &format!("epdiff{dim}"),
        table,
        "density p_i d_j + p_j d_i + (d_j p_i) on delta, read as {p_j lambda p_i}; evolution m_t = {m, H} = -{H_lambda m}|_0",
    )
}

/// `m_t = −{H_λ m}|_{λ=0}` for `H = ½ Σ m_k²`.
pub fn epdiff_evolution(dim: usize) -> Result<Vec<DiffPoly>, ModelError> {
    let b = epdiff_bracket(dim)?;
    let s = b.table.space();
    let mut h = DiffPoly::zero(s);
    for k in 0..dim {
        h = &h + &DiffPoly::generator(s, k).pow(2).scaled(&rat(1, 2));
    }
    Ok(b.table.hamiltonian_flow(&h).into_iter().map(|p| -p).collect())
}

/// `m_i,t = −(m_j ∂_j m_i + m_j ∂_i m_j + m_i ∂_j m_j)` with `u = m`.
pub fn epdiff_expected(dim: usize) -> Result<Vec<DiffPoly>, ModelError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(ModelError::Dimension(dim));
    }
    let s = Space::new(dim, dim).map_err(|_| ModelError::Dimension(dim))?;
    let m = |k| DiffPoly::generator(s, k);
    let dm = |k: usize, j: usize| DiffPoly::jet_of(s, k, &unit(dim, j));
    Ok((0..dim)
        .map(|i| {
            let mut acc = DiffPoly::zero(s);
            for j in 0..dim {
                acc = &acc + &(&m(j) * &dm(i, j));
                acc = &acc + &(&m(j) * &dm(j, i));
                acc = &acc + &(&m(i) * &dm(j, j));
            }
            -acc
        })
        .collect())
}
