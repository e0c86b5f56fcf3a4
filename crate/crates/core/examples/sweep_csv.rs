//! Drives the command-line front end in-process and prints a sweep CSV.

fn main() {
    let args = [
        "owpn", "bound", "sweep", "--p-start", "10", "--p-stop", "1e8", "--p-points", "8",
        "--sigma2", "1", "--alpha", "0.5", "--bound", "owpn_old_th3", "owpn_new_th4", "--units", "nats",
    ];
    let code = owpn::cli::run(args.map(String::from), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
