from treeflow.cli import main

main()
