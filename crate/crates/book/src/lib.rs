//! The chapters of `book/` as doc modules, so `cargo test` compiles and runs
//! every code block in the guide.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(exact_arithmetic, "exact-arithmetic.md");
chapter!(orders_and_cones, "orders-and-cones.md");
chapter!(finite_dominance, "finite-dominance.md");
chapter!(convex_hulls, "convex-hulls.md");
chapter!(external_stability, "external-stability.md");
chapter!(objective_subsets, "objective-subsets.md");
chapter!(polyhedra, "polyhedra.md");
chapter!(connectedness, "connectedness.md");
chapter!(command_line, "command-line.md");
