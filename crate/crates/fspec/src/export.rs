//! Tables and raw dumps of symbol fields and spectra.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{ensure, Context, Result};
use fspec_core::spectral::MULTIPLET_TOL;
use fspec_core::{Spectrum, Sym2, SymbolField, TorusGrid};

const SYMBOL_MAGIC: &[u8; 4] = b"FSYM";
const VECTOR_MAGIC: &[u8; 4] = b"FVEC";

/// `node, i, j, x, y, sigma11, sigma12, sigma22, mu, a`.
pub fn write_symbol_csv(field: &SymbolField, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["node", "i", "j", "x", "y", "sigma11", "sigma12", "sigma22", "mu", "a"])?;
    let grid = field.grid();
    for idx in 0..grid.len() {
        let (i, j) = grid.coords(idx);
        let p = grid.point(idx);
        let s = field.sigma_star()[idx];
        w.write_record(&[
            idx.to_string(),
            i.to_string(),
            j.to_string(),
            p.x().to_string(),
            p.y().to_string(),
            s.xx.to_string(),
            s.xy.to_string(),
            s.yy.to_string(),
            field.mu()[idx].to_string(),
            field.a()[idx].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Little-endian: magic `FSYM`, `nx: u32`, `ny: u32`, then per node
/// `σ*₁₁, σ*₁₂, σ*₂₂, μ, a` as `f64`.
pub fn write_symbol_binary(field: &SymbolField, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    let grid = field.grid();
    w.write_all(SYMBOL_MAGIC)?;
    w.write_all(&(grid.nx() as u32).to_le_bytes())?;
    w.write_all(&(grid.ny() as u32).to_le_bytes())?;
    for idx in 0..grid.len() {
        let s = field.sigma_star()[idx];
        for v in [s.xx, s.xy, s.yy, field.mu()[idx], field.a()[idx]] {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_symbol_binary(path: &Path) -> Result<SymbolField> {
    let mut r = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    ensure!(&magic == SYMBOL_MAGIC, "{} is not a symbol dump", path.display());
    let grid = TorusGrid::new(read_u32(&mut r)? as usize, read_u32(&mut r)? as usize)?;
    let mut sigma = Vec::with_capacity(grid.len());
    let mut mu = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        sigma.push(Sym2::new(read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?));
        mu.push(read_f64(&mut r)?);
        read_f64(&mut r)?;
    }
    Ok(SymbolField::from_parts(&grid, sigma, mu)?)
}

/// `k, lambda, multiplicity, residual`.
pub fn write_spectrum_csv(spectrum: &Spectrum, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["k", "lambda", "multiplicity", "residual"])?;
    for (k, (lambda, res)) in spectrum.eigenvalues.iter().zip(&spectrum.residuals).enumerate() {
        w.write_record(&[
            k.to_string(),
            lambda.to_string(),
            spectrum.multiplicity(k, MULTIPLET_TOL).to_string(),
            res.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Little-endian: magic `FVEC`, `nx: u32`, `ny: u32`, `count: u32`, then the
/// eigenvectors one after another as row-major `f64` grids.
pub fn write_eigenvectors(spectrum: &Spectrum, grid: &TorusGrid, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    w.write_all(VECTOR_MAGIC)?;
    for v in [grid.nx(), grid.ny(), spectrum.eigenvectors.len()] {
        w.write_all(&(v as u32).to_le_bytes())?;
    }
    for u in &spectrum.eigenvectors {
        ensure!(u.len() == grid.len(), "eigenvector length {} does not match the grid", u.len());
        for v in u {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use fspec_core::spectral::{assemble, SolverOptions};
    use fspec_core::{FiberRule, MetricSpec};

    #[test]
    fn symbol_binary_round_trip() {
        let grid = TorusGrid::new(8, 10).unwrap();
        let field = SymbolField::compute(&MetricSpec::randers_modulated(1.0, 1.0, 0.6), &grid, &FiberRule::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.bin");
        write_symbol_binary(&field, &path).unwrap();
        let back = read_symbol_binary(&path).unwrap();
        assert_eq!(back.sigma_star(), field.sigma_star());
        assert_eq!(back.mu(), field.mu());
        write_symbol_csv(&field, &dir.path().join("s.csv")).unwrap();
        let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
        assert_eq!(text.lines().count(), 81);
    }

    #[test]
    fn spectrum_table_has_multiplicities() {
        let grid = TorusGrid::square(12).unwrap();
        let field = SymbolField::compute(&MetricSpec::euclidean(), &grid, &FiberRule::default()).unwrap();
        let s = assemble(&field).unwrap().solve(4, &SolverOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        write_spectrum_csv(&s, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,lambda,multiplicity,residual");
        assert!(lines[1].split(',').nth(2) == Some("1"));
        assert!(lines[2].split(',').nth(2) == Some("4"));
        write_eigenvectors(&s, &grid, &dir.path().join("v.bin")).unwrap();
        let len = std::fs::metadata(dir.path().join("v.bin")).unwrap().len();
        assert_eq!(len, 16 + 5 * 144 * 8);
    }
}
