//! Mordell-Weil lattices of elliptic surfaces `y^2 = x^3 + a2 x^2 + a4 x + a6`
//! over `k(t)`, with `k` a number field.

pub mod arrangements;
pub mod book;
pub mod bundled;
pub mod certificate;
pub mod divisibility;
pub mod error;
pub mod golden;
pub mod heights;
pub mod kodaira;
pub mod local;
pub mod report;
pub mod scenario;
pub mod sections;
pub mod snf;
pub mod torsion;
pub mod weierstrass;

pub use arrangements::{
    all_even_tangency, intersection_multiplicities, pencil_setup, same_combinatorics, summarize, tangent_conics_through,
    ArrangementSummary, Intersection, PencilSetup, PlaneCurve, PointClass,
};
pub use book::SectionBook;
pub use divisibility::{
    all_odd_p_analysis, coordinates_of, exists_cover_multipliers, p_divisible, verify_presentation, Coordinates,
    MWPresentation, OddPrimeAnalysis, PresentationReport, PrimeResult, Verdict,
};
pub use error::{CoreError, ErrorClass, Result};
pub use golden::GoldenCheck;
pub use heights::{EllipticSurface, HeightReport, LocalIntersection, PhiDecomposition};
pub use report::{run_query, Outcome, Overrides};
pub use scenario::{Query, Scenario, ScenarioFile};
pub use kodaira::{fiber_configuration, intersection_matrix, FiberConfiguration, FiberData, KodairaType};
pub use sections::{section_from_graph, GraphLift, Section};
pub use torsion::{torsion_subgroup, TorsionGroup};
pub use weierstrass::{ModelInvariants, Place, WeierstrassModel};
pub use mwl_algebra as algebra;
