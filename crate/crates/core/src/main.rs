fn main() -> std::process::ExitCode {
    regrade::harness::cli::main()
}
