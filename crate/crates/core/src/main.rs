fn main() -> std::process::ExitCode {
    uniqfem::cli::main()
}
