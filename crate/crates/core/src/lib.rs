//! Exact computations with state splittings of directed graphs.
//!
//! The crate covers in-splits and out-splits of finite directed graphs and of
//! graphs built from circles, the strong shift equivalences they induce on
//! adjacency matrices, finite-window conjugacy certificates, and a
//! finite-dimensional model of the associated graph correspondences. All
//! arithmetic is exact.
//!
//! The linear algebra is generic over [`Scalar`]; the aliases below fix the
//! concrete types used by the graph-level API.

pub mod circle;
pub mod conjugacy;
pub mod corr;
pub mod error;
pub mod format;
pub mod graph;
pub mod iso;
pub mod matrix;
pub mod moves;
pub mod poly;
pub mod scalar;
pub mod snf;
pub mod sse;

pub use circle::{
    circle_in_split, circle_out_split, circle_report, component_count, fibred_product,
    power_circle_graph, verify_parametrization, CircleGraph, CircleMap, CircleReport, FibredProduct,
    RationalAngle,
};
pub use conjugacy::{
    in_split_block_code, invariant_report, out_split_block_code, verify_certificate,
    BlockCodeCertificate, CertificateReport, InvariantReport,
};
pub use corr::{
    covariance_ideal, decompose_b, diagonal_level_check, graph_correspondence, insplit_correspondence,
    outsplit_correspondence, tensor, verify_frame, verify_morphism, CorrespondenceMorphism,
    CorrespondenceReport, FinDimCorrespondence,
};
pub use error::{Error, Result};
pub use format::{
    export_dot, parse_graph, parse_matrix, parse_split, parse_witness, write_graph, write_matrix,
    write_split, write_witness, SplitSpec, WitnessFile,
};
pub use graph::{adjacency_matrix, dual_graph, paths, power_graph, singular_vertices, DirectedGraph, Edge, Path};
pub use iso::{are_isomorphic, are_isomorphic_with_limit, GraphIsomorphism};
pub use matrix::Matrix;
pub use moves::{
    apply_in_split, apply_out_split, complete_in_split, complete_out_split, compose_in_splits,
    diamond_spec, identity_in_split, identity_out_split, in_split_from_partition,
    out_split_from_partition, validate_in_split, validate_out_split, InSplitSpec, OutSplitSpec,
    ValidationReport, Violation,
};
pub use poly::Poly;
pub use scalar::{EuclideanScalar, Scalar};
pub use snf::{smith_normal_form, SmithForm};
pub use sse::{
    bipartite_inflation, bowen_franks, check_elementary_sse, in_split_witness, out_split_witness,
    search_elementary_sse, trace_sequence, verify_elementary_sse, verify_sse_chain,
    weighted_char_poly, BowenFranks, ChainStep, Roles, SearchOutcome, SseCheck, SseWitness,
};

pub type Int = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rational>;
pub type IntPoly = Poly<Int>;
