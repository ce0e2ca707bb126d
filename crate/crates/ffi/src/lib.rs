//! C ABI over `topocryst`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns a [`TcStatus`]; on failure the message is
//! available from [`tc_last_error`] until the next call on the same thread.
//! Strings returned through out-pointers are released with
//! [`tc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use topocryst::analysis::{classify_2d, classify_3d, orthogonal_symmetry, point_group, shortest_vectors, Class2d, Class3d};
use topocryst::block::{builtin_block, AnyBlock, BuildingBlock};
use topocryst::graph::QuotientGraph;
use topocryst::lattice::Lattice;
use topocryst::linalg::Mat;
use topocryst::net::{build_net, CrystalNet, ExportFormat, Window};
use topocryst::realization::standard_realization;
use topocryst::rings::RingSearch;
use topocryst::scalar::{ratio, Rational, Scalar};
use topocryst::symmetry::symmetry_report;
use topocryst::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Domain = 5,
    NotConverged = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcFormat {
    Xyz = 0,
    Obj = 1,
    Json = 2,
}

/// Lattice class; 2D and 3D share one enumeration.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcLatticeClass {
    NotOs = 0,
    Cubic = 1,
    Bcc = 2,
    Fcc = 3,
    Square = 4,
    Triangular = 5,
    /// Dimension without a classifier.
    Unclassified = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcLatticeSummary {
    pub alpha_sq: f64,
    pub k_count: usize,
    pub group_order: usize,
    pub is_os: bool,
    pub class: TcLatticeClass,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TcSymmetry {
    pub point_group_order: usize,
    pub proper: usize,
    pub improper: usize,
    pub strongly_isotropic: bool,
    pub chiral: bool,
}

/// A building block (opaque).
pub struct TcBlock(AnyBlock);

enum AnyNet {
    Exact(CrystalNet<Rational>),
    Float(CrystalNet<f64>),
}

/// A finite piece of a net (opaque).
pub struct TcNet(AnyNet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> TcStatus {
    match err {
        Error::Parse { .. } => TcStatus::Parse,
        Error::UnknownBuiltin(_) | Error::InvalidArgument(_) | Error::Dimension { .. } => TcStatus::InvalidArgument,
        Error::NotConverged { .. } => TcStatus::NotConverged,
        _ => TcStatus::Domain,
    }
}

struct Failure(TcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null() -> Failure {
    Failure(TcStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TcStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn block_arg<'a>(b: *const TcBlock) -> Result<&'a AnyBlock, Failure> {
    b.as_ref().map(|b| &b.0).ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builtin block: `laves`, `diamond`, `honeycomb` or `cubic`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_block_builtin(name: *const c_char, out: *mut *mut TcBlock) -> TcStatus {
    guard(|| {
        let block = builtin_block(str_arg(name)?)?;
        write_out(out, Box::into_raw(Box::new(TcBlock(block))))
    })
}

/// Block from QG text with `v=` annotations.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_block_parse(text: *const c_char, out: *mut *mut TcBlock) -> TcStatus {
    guard(|| {
        let block = QuotientGraph::parse(str_arg(text)?)?.block()?;
        write_out(out, Box::into_raw(Box::new(TcBlock(block))))
    })
}

/// # Safety
/// `b` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tc_block_free(b: *mut TcBlock) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Dimension of the block, 0 for null.
///
/// # Safety
/// `b` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_block_dim(b: *const TcBlock) -> usize {
    b.as_ref().map_or(0, |b| b.0.dim())
}

/// # Safety
/// `b` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_block_vertex_count(b: *const TcBlock) -> usize {
    b.as_ref().map_or(0, |b| b.0.graph().vertex_count())
}

/// First Betti number of the quotient graph.
///
/// # Safety
/// `b` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_block_betti(b: *const TcBlock) -> usize {
    b.as_ref().map_or(0, |b| b.0.graph().betti_number())
}

/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_block_is_harmonic(b: *const TcBlock, out: *mut bool) -> TcStatus {
    guard(|| {
        let harmonic = match block_arg(b)? {
            AnyBlock::Exact(b) => b.is_harmonic(),
            AnyBlock::Float(b) => b.is_harmonic(),
        };
        write_out(out, harmonic)
    })
}

/// Sum of squared edge lengths.
///
/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_block_energy(b: *const TcBlock, out: *mut f64) -> TcStatus {
    guard(|| {
        let e = match block_arg(b)? {
            AnyBlock::Exact(b) => b.energy().to_f64(),
            AnyBlock::Float(b) => b.energy(),
        };
        write_out(out, e)
    })
}

/// Period lattice basis, one vector per row, into `out[0..d*d]`.
///
/// # Safety
/// `b` must be a valid handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_block_period_basis(b: *const TcBlock, out: *mut f64, len: usize) -> TcStatus {
    guard(|| {
        let vectors: Vec<Vec<f64>> = match block_arg(b)? {
            AnyBlock::Exact(b) => b.default_period_lattice()?.to_f64().basis_vectors(),
            AnyBlock::Float(b) => b.default_period_lattice()?.basis_vectors(),
        };
        let flat: Vec<f64> = vectors.concat();
        if out.is_null() {
            return Err(null());
        }
        if len < flat.len() {
            return Err(Failure(TcStatus::InvalidArgument, format!("buffer holds {len}, need {}", flat.len())));
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), out, flat.len());
        Ok(())
    })
}

/// QG text of the block.
///
/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_block_to_qg(b: *const TcBlock, out: *mut *mut c_char) -> TcStatus {
    guard(|| write_out(out, into_c_string(block_arg(b)?.to_qg())))
}

fn summarize<S: Scalar>(l: &Lattice<S>) -> Result<TcLatticeSummary, Failure> {
    let k = shortest_vectors(l);
    let group = point_group(l);
    let verdict = orthogonal_symmetry(l, &k, &group);
    let class = match l.dim() {
        2 => match classify_2d(l)?.0 {
            Class2d::Square => TcLatticeClass::Square,
            Class2d::Triangular => TcLatticeClass::Triangular,
            Class2d::NotOs => TcLatticeClass::NotOs,
        },
        3 => match classify_3d(l)?.0 {
            Class3d::Cubic => TcLatticeClass::Cubic,
            Class3d::Bcc => TcLatticeClass::Bcc,
            Class3d::Fcc => TcLatticeClass::Fcc,
            Class3d::NotOs => TcLatticeClass::NotOs,
        },
        _ => TcLatticeClass::Unclassified,
    };
    Ok(TcLatticeSummary {
        alpha_sq: k.alpha_sq.to_f64(),
        k_count: k.len(),
        group_order: group.order(),
        is_os: verdict.is_os,
        class,
    })
}

/// Analyzes the lattice spanned by the `d` rows of `rows` (`d*d` doubles).
/// Integer-valued input is analyzed in exact arithmetic.
///
/// # Safety
/// `rows` must hold `d*d` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_lattice_analyze(rows: *const f64, d: usize, out: *mut TcLatticeSummary) -> TcStatus {
    guard(|| {
        if rows.is_null() {
            return Err(null());
        }
        if d == 0 {
            return Err(Failure(TcStatus::InvalidArgument, "dimension must be positive".into()));
        }
        let xs = std::slice::from_raw_parts(rows, d * d);
        let integral = xs.iter().all(|x| x.fract() == 0.0 && x.abs() < 1e15);
        let summary = if integral {
            let m = Mat::from_fn(d, d, |i, j| ratio(xs[j * d + i] as i64, 1));
            summarize(&Lattice::new(m)?)?
        } else {
            summarize(&Lattice::new(Mat::from_fn(d, d, |i, j| xs[j * d + i]))?)?
        };
        write_out(out, summary)
    })
}

/// Smallest ring length up to `cap`.
///
/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_rings_girth(b: *const TcBlock, cap: usize, out: *mut usize) -> TcStatus {
    guard(|| {
        let g = match block_arg(b)? {
            AnyBlock::Exact(b) => RingSearch::new(b)?.girth(cap)?,
            AnyBlock::Float(b) => RingSearch::new(b)?.girth(cap)?,
        };
        write_out(out, g)
    })
}

fn ring_count<S: Scalar>(b: &BuildingBlock<S>, vertex: usize, length: usize) -> Result<usize, Failure> {
    if vertex >= b.graph().vertex_count() {
        return Err(Failure(TcStatus::InvalidArgument, format!("no vertex {vertex}")));
    }
    Ok(RingSearch::new(b)?.rings_through(vertex, length).len())
}

/// Number of rings of `length` through vertex index `vertex`.
///
/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_rings_count(b: *const TcBlock, vertex: usize, length: usize, out: *mut usize) -> TcStatus {
    guard(|| {
        let n = match block_arg(b)? {
            AnyBlock::Exact(b) => ring_count(b, vertex, length)?,
            AnyBlock::Float(b) => ring_count(b, vertex, length)?,
        };
        write_out(out, n)
    })
}

/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_symmetry(b: *const TcBlock, out: *mut TcSymmetry) -> TcStatus {
    guard(|| {
        let r = match block_arg(b)? {
            AnyBlock::Exact(b) => symmetry_report(&build_net(b, &b.graph().homology_basis(), &Window::cube(b.dim(), 0))?),
            AnyBlock::Float(b) => symmetry_report(&build_net(b, &b.graph().homology_basis(), &Window::cube(b.dim(), 0))?),
        };
        write_out(
            out,
            TcSymmetry {
                point_group_order: r.point_group_order,
                proper: r.proper,
                improper: r.improper,
                strongly_isotropic: r.strongly_isotropic,
                chiral: r.chiral,
            },
        )
    })
}

/// Standard realization of the block's quotient graph (unit covolume).
///
/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_standardize(
    b: *const TcBlock,
    tol: f64,
    max_iter: usize,
    seed: u64,
    out: *mut *mut TcBlock,
) -> TcStatus {
    guard(|| {
        let state = standard_realization(block_arg(b)?.graph(), tol, max_iter, seed)?;
        write_out(out, Box::into_raw(Box::new(TcBlock(AnyBlock::Float(state.block)))))
    })
}

/// Net on the cells `[−n, n]^d`.
///
/// # Safety
/// `b` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_net_build(b: *const TcBlock, n: i64, out: *mut *mut TcNet) -> TcStatus {
    guard(|| {
        if n < 0 {
            return Err(Failure(TcStatus::InvalidArgument, "window must be non-negative".into()));
        }
        let net = match block_arg(b)? {
            AnyBlock::Exact(b) => AnyNet::Exact(build_net(b, &b.graph().homology_basis(), &Window::cube(b.dim(), n))?),
            AnyBlock::Float(b) => AnyNet::Float(build_net(b, &b.graph().homology_basis(), &Window::cube(b.dim(), n))?),
        };
        write_out(out, Box::into_raw(Box::new(TcNet(net))))
    })
}

/// # Safety
/// `net` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tc_net_free(net: *mut TcNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_net_vertex_count(net: *const TcNet) -> usize {
    match net.as_ref().map(|n| &n.0) {
        Some(AnyNet::Exact(n)) => n.vertices.len(),
        Some(AnyNet::Float(n)) => n.vertices.len(),
        None => 0,
    }
}

/// # Safety
/// `net` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_net_bond_count(net: *const TcNet) -> usize {
    match net.as_ref().map(|n| &n.0) {
        Some(AnyNet::Exact(n)) => n.bonds.len(),
        Some(AnyNet::Float(n)) => n.bonds.len(),
        None => 0,
    }
}

/// Serialized net in the chosen format.
///
/// # Safety
/// `net` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_net_export(net: *const TcNet, format: TcFormat, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let format = match format {
            TcFormat::Xyz => ExportFormat::Xyz,
            TcFormat::Obj => ExportFormat::Obj,
            TcFormat::Json => ExportFormat::Json,
        };
        let text = match &net.as_ref().ok_or_else(null)?.0 {
            AnyNet::Exact(n) => n.export(format),
            AnyNet::Float(n) => n.export(format),
        };
        write_out(out, into_c_string(text))
    })
}
