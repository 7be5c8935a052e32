namespace ifslab {}
