//! Driving the command line from code.

fn main() {
    for args in [
        vec!["gvf", "height", "--field", "Q", "2", "3"],
        vec!["gvf", "prodcheck", "--field", "Qz", "z-2"],
        vec!["gvf", "positivity", "max(x1,0) - max(x1,x2,0)", "6", "2", "3"],
    ] {
        let out = gvf::cli::run(&args);
        println!("$ {}\nexit {}\n{}", args.join(" "), out.code, out.stdout);
    }
}
