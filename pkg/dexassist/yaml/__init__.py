from dexassist.yaml.recursiveloader import RecursiveLoader
