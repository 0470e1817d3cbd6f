"""CLI controllers, one per subcommand group."""
