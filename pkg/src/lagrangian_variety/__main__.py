from lagrangian_variety.cli import main

main()
