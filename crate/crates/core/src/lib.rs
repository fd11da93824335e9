//! Joint service-graph decomposition and VNF placement.
//!
//! A service request ([`ServiceGraph`]) can be expanded into one of several
//! typed network-function graphs ([`model::Decomposition`]); every function of
//! the chosen expansion must then be hosted on a node of the physical network.
//! Two objectives are minimized at once: the resource cost of the hosting and
//! the shortest-path latency between the hosts of consecutive functions.
//!
//! Three solvers share one evaluation path ([`problem::Problem`]):
//!
//! * [`nsga2`]: the MODMVNF genetic optimizer (non-dominated sorting,
//!   crowding distance, segment crossover, host-swap mutation);
//! * [`mopso`]: an external-archive multi-objective particle swarm baseline;
//! * [`exact`]: exhaustive enumeration of the true Pareto front on small
//!   instances.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, which is what the CLI uses.

pub mod encoding;
pub mod exact;
pub mod front;
pub mod generator;
pub mod model;
pub mod mopso;
pub mod nsga2;
pub mod objectives;
pub mod problem;
pub mod rng;
pub mod scalar;

pub use encoding::{Chromosome, Gene};
pub use model::{NetworkFunction, NfType, ServiceGraph};
pub use scalar::Scalar;

pub type Instance = model::Instance<f64>;
pub type PhysicalNetwork = model::PhysicalNetwork<f64>;
pub type PhysicalNode = model::PhysicalNode<f64>;
pub type LatencyMatrix = model::LatencyMatrix<f64>;
pub type ObjectiveValues = objectives::ObjectiveValues<f64>;
pub type Problem = problem::Problem<f64>;
pub type Solution = encoding::Solution<f64>;
pub type ParetoFront = front::ParetoFront<f64>;
pub type FrontPoint = front::FrontPoint<f64>;
pub type GaOutput = nsga2::RunOutput<f64>;
pub type PsoOutput = mopso::RunOutput<f64>;
pub type ExactFront = exact::ExactFront<f64>;

pub type InstanceF32 = model::Instance<f32>;
pub type ProblemF32 = problem::Problem<f32>;
